#pragma once

// Energy-aware routing with time-varying link costs.
//
// Every epoch (one simulation step, standing in for a HELLO round) each link
// is priced from the remaining energy of the nodes that pay for it, routes to
// the cheapest sink are recomputed with Bellman-Ford, and every origin pushes
// Q_i dt packets (fluid) along its route. A transmission debits one unit per
// packet from the sender and from each helper of a CB/CT hop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnlife/errors.hpp"
#include "wsnlife/network.hpp"

namespace wsnlife::dyn {

struct CostParams {
  double beta1 = 1.0;            // exponent on the transmitting node
  double beta2 = 1.0;            // exponent on CB/CT helpers
  double epsilon_floor = 1e-6;   // remaining-energy fraction floor inside costs

  void validate() const {
    if (!(beta1 > 0.0)) throw DomainError("beta1 must be > 0");
    if (!(beta2 >= 0.0)) throw DomainError("beta2 must be >= 0");
    if (!(epsilon_floor > 0.0 && epsilon_floor <= 1e-3)) throw DomainError("epsilon_floor must lie in (0, 1e-3]");
  }
};

enum class RoutingPolicy {
  HopCount,        // unit cost per direct link, CB/CT links unused
  ResidualEnergy,  // (E_i / E_i_remaining)^beta1 per direct link, CB/CT links unused
  Cooperative,     // full cost with CB/CT links
};

inline std::string to_string(RoutingPolicy p) {
  switch (p) {
    case RoutingPolicy::HopCount: return "shortest_path";
    case RoutingPolicy::ResidualEnergy: return "residual_energy";
    case RoutingPolicy::Cooperative: return "cbct";
  }
  return "?";
}

// E / max(E_remaining, floor E); a node without a battery is treated as depleted.
inline double depletion_ratio(const net::NodeState& n, double epsilon_floor) {
  if (!(n.energy_initial > 0.0)) return 1.0 / epsilon_floor;
  return n.energy_initial / std::max(n.energy_remaining, epsilon_floor * n.energy_initial);
}

// (E_i/Ē_i)^beta1 + sum over helpers (E_l/Ē_l)^beta2, read from the
// nodes' current remaining energy.
inline double link_cost(const net::Network& net, const net::Edge& edge, const CostParams& p) {
  double cost = std::pow(depletion_ratio(net.node(edge.src), p.epsilon_floor), p.beta1);
  for (int h : edge.helpers) cost += std::pow(depletion_ratio(net.node(h), p.epsilon_floor), p.beta2);
  return cost;
}

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

struct RoutingTable {
  std::vector<double> distance;      // per node; +inf when no sink is reachable
  std::vector<std::size_t> next_edge;  // per node; kNoEdge at sinks and unreachable nodes

  bool reachable(std::size_t idx) const { return std::isfinite(distance[idx]); }
};

// Least-cost routes to the cheapest sink. `edge_cost` is aligned with
// net.edges; a negative or non-finite entry marks the edge unusable. Ties
// prefer direct links, then the lower next-hop id, then the lower edge index.
inline RoutingTable shortest_paths(const net::Network& net, std::span<const double> edge_cost,
                                   std::span<const bool> alive = {}) {
  const std::size_t n = net.size();
  auto is_alive = [&](std::size_t i) { return alive.empty() || alive[i]; };
  RoutingTable rt;
  rt.distance.assign(n, std::numeric_limits<double>::infinity());
  rt.next_edge.assign(n, kNoEdge);
  for (std::size_t i = 0; i < n; ++i)
    if (net.nodes[i].is_sink() && is_alive(i)) rt.distance[i] = 0.0;

  auto usable = [&](std::size_t e) {
    const auto& edge = net.edges[e];
    return edge_cost[e] >= 0.0 && std::isfinite(edge_cost[e]) && !net.node(edge.src).is_sink();
  };

  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      if (!usable(e)) continue;
      const std::size_t u = net.index(net.edges[e].src), v = net.index(net.edges[e].dst);
      const double cand = edge_cost[e] + rt.distance[v];
      if (cand < rt.distance[u]) {
        rt.distance[u] = cand;
        changed = true;
      }
    }
    if (!changed) break;
  }

  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (!usable(e)) continue;
    const auto& edge = net.edges[e];
    const std::size_t u = net.index(edge.src), v = net.index(edge.dst);
    if (!std::isfinite(rt.distance[u])) continue;
    const double cand = edge_cost[e] + rt.distance[v];
    if (cand > rt.distance[u] + 1e-9 * (1.0 + rt.distance[u])) continue;
    const std::size_t cur = rt.next_edge[u];
    if (cur == kNoEdge) {
      rt.next_edge[u] = e;
      continue;
    }
    const auto& best = net.edges[cur];
    const auto key = [](const net::Edge& x) { return std::pair{x.kind == net::EdgeKind::Direct ? 0 : 1, x.dst}; };
    if (key(edge) < key(best)) rt.next_edge[u] = e;
  }
  return rt;
}

struct SimConfig {
  CostParams cost;
  RoutingPolicy policy = RoutingPolicy::Cooperative;
  double dt = 0.005;          // step and route-update epoch
  double horizon = 10.0;
  bool stop_at_first_failure = true;
  bool record_costs = true;
  // The fluid model draws no random numbers; kept so a run is identified by
  // the same tuple as every other subcommand.
  std::uint64_t seed = 0;

  void validate() const {
    cost.validate();
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  }
};

struct SimEvent {
  double time = 0.0;
  int node = 0;
  std::string what;
};

struct SimTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> energy;  // [step][node index]
  std::vector<std::vector<double>> cost;    // [step][edge index]; NaN for unusable edges
  double first_failure_time = std::numeric_limits<double>::infinity();
  int failed_node = 0;
  std::vector<SimEvent> events;
  double max_audit_error = 0.0;  // |debited - (hops + helpers) * injected|, worst step

  std::vector<double> energy_series(const net::Network& net, int id) const {
    std::vector<double> s;
    for (const auto& row : energy) s.push_back(row[net.index(id)]);
    return s;
  }

  // Lifetime with the horizon standing in when nothing failed.
  double lifetime(double horizon) const { return std::isfinite(first_failure_time) ? first_failure_time : horizon; }
};

// Cost of every edge under `policy`; -1 for edges that may not be used.
inline std::vector<double> edge_costs(const net::Network& net, RoutingPolicy policy, const CostParams& p,
                                      std::span<const bool> alive) {
  std::vector<double> out(net.edges.size(), -1.0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& edge = net.edges[e];
    bool ok = alive[net.index(edge.src)] && alive[net.index(edge.dst)];
    for (int h : edge.helpers) ok = ok && alive[net.index(h)];
    if (!ok) continue;
    if (edge.kind == net::EdgeKind::CbCt && policy != RoutingPolicy::Cooperative) continue;
    switch (policy) {
      case RoutingPolicy::HopCount: out[e] = 1.0; break;
      case RoutingPolicy::ResidualEnergy:
        out[e] = std::pow(depletion_ratio(net.node(edge.src), p.epsilon_floor), p.beta1);
        break;
      case RoutingPolicy::Cooperative: out[e] = link_cost(net, edge, p); break;
    }
  }
  return out;
}

inline SimTrace simulate(net::Network net, const SimConfig& cfg) {
  cfg.validate();
  net.validate();
  const std::size_t n = net.size();
  // std::vector<bool> cannot back a span.
  auto alive_vec = std::make_unique<bool[]>(n);
  std::fill_n(alive_vec.get(), n, true);
  auto alive_span = [&] { return std::span<const bool>(alive_vec.get(), n); };
  std::vector<bool> reported_disconnect(n, false);

  SimTrace trace;
  auto record = [&](double t, const std::vector<double>& costs) {
    trace.times.push_back(t);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = net.nodes[i].energy_remaining;
    trace.energy.push_back(std::move(e));
    if (cfg.record_costs) {
      std::vector<double> c(costs);
      for (double& x : c)
        if (x < 0.0) x = std::numeric_limits<double>::quiet_NaN();
      trace.cost.push_back(std::move(c));
    }
  };

  const long steps = static_cast<long>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
  std::vector<double> costs = edge_costs(net, cfg.policy, cfg.cost, alive_span());
  record(0.0, costs);

  for (long step = 1; step <= steps; ++step) {
    const double t_prev = static_cast<double>(step - 1) * cfg.dt;
    const double t = static_cast<double>(step) * cfg.dt;
    const RoutingTable rt = shortest_paths(net, costs, alive_span());

    std::vector<double> debit(n, 0.0);
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& src = net.nodes[i];
      if (!src.is_origin() || !alive_vec[i]) continue;
      if (!rt.reachable(i)) {
        if (!reported_disconnect[i]) {
          trace.events.push_back({t_prev, src.id, "origin disconnected; its traffic halts"});
          reported_disconnect[i] = true;
        }
        continue;
      }
      const double amount = src.rate * cfg.dt;
      std::size_t at = i;
      std::size_t hops = 0, helpers = 0;
      while (!net.nodes[at].is_sink()) {
        const auto& edge = net.edges[rt.next_edge[at]];
        debit[at] += amount;
        for (int h : edge.helpers) debit[net.index(h)] += amount;
        ++hops;
        helpers += edge.helpers.size();
        at = net.index(edge.dst);
        if (hops > n) throw std::logic_error("routing loop detected");
      }
      expected += amount * static_cast<double>(hops + helpers);
    }

    double debited = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      debited += debit[i];
      net.nodes[i].energy_remaining -= debit[i];
    }
    trace.max_audit_error = std::max(trace.max_audit_error, std::abs(debited - expected));

    std::vector<int> died;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& nd = net.nodes[i];
      if (alive_vec[i] && !nd.is_sink() && debit[i] > 0.0 && nd.energy_remaining <= 1e-9 * nd.energy_initial) {
        alive_vec[i] = false;
        died.push_back(nd.id);
        trace.events.push_back({t, nd.id, "battery depleted"});
      }
    }

    costs = edge_costs(net, cfg.policy, cfg.cost, alive_span());
    record(t, costs);

    if (!died.empty() && !std::isfinite(trace.first_failure_time)) {
      trace.first_failure_time = t;
      trace.failed_node = died.front();
      if (cfg.stop_at_first_failure) break;
    }
  }
  return trace;
}

struct BaselineRun {
  double shortest_path = 0.0;
  double residual_energy = 0.0;
  double cooperative = 0.0;
};

struct BaselineSummary {
  std::vector<BaselineRun> runs;
  BaselineRun mean;
  // Mean CB/CT lifetime over mean residual-energy lifetime, minus one, in percent.
  double improvement_pct = 0.0;
};

// Lifetime of each network under hop-count routing, residual-energy routing
// (CB/CT links ignored) and the cooperative cost with CB/CT links.
inline BaselineSummary compare_baselines(std::span<const net::Network> nets, const SimConfig& base) {
  BaselineSummary out;
  for (const auto& net : nets) {
    BaselineRun run;
    SimConfig cfg = base;
    cfg.record_costs = false;
    cfg.stop_at_first_failure = true;
    cfg.policy = RoutingPolicy::HopCount;
    run.shortest_path = simulate(net, cfg).lifetime(cfg.horizon);
    cfg.policy = RoutingPolicy::ResidualEnergy;
    run.residual_energy = simulate(net, cfg).lifetime(cfg.horizon);
    cfg.policy = RoutingPolicy::Cooperative;
    run.cooperative = simulate(net, cfg).lifetime(cfg.horizon);
    out.runs.push_back(run);
  }
  if (!out.runs.empty()) {
    const double k = static_cast<double>(out.runs.size());
    for (const auto& r : out.runs) {
      out.mean.shortest_path += r.shortest_path / k;
      out.mean.residual_energy += r.residual_energy / k;
      out.mean.cooperative += r.cooperative / k;
    }
    out.improvement_pct = 100.0 * (out.mean.cooperative / out.mean.residual_energy - 1.0);
  }
  return out;
}

}  // namespace wsnlife::dyn
