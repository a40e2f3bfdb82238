#pragma once

// Network model for lifetime optimisation: nodes with positions, batteries
// and traffic rates, direct links, and CB/CT virtual links that borrow a
// helper node to stretch a transmission past the direct range.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "wsnlife/coop_mode.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/linkmodel.hpp"

namespace wsnlife::net {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct NodeState {
  int id = 0;
  Point position;
  double energy_initial = 1.0;
  double energy_remaining = 1.0;
  double rate = 0.0;  // packets per unit time; negative at sinks

  bool is_sink() const { return rate < 0.0; }
  bool is_origin() const { return rate > 0.0; }
  bool operator==(const NodeState&) const = default;
};

enum class EdgeKind { Direct, CbCt };

inline std::string to_string(EdgeKind k) { return k == EdgeKind::Direct ? "direct" : "cbct"; }

struct Edge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::Direct;
  std::vector<int> helpers;  // empty for direct links

  bool operator==(const Edge&) const = default;
};

// Node ids run 1..n and node i is stored at index i - 1.
struct Network {
  link::ChannelParams params = link::ChannelParams::defaults();
  std::vector<NodeState> nodes;
  std::vector<Edge> edges;

  std::size_t size() const { return nodes.size(); }
  std::size_t index(int id) const { return static_cast<std::size_t>(id - 1); }
  const NodeState& node(int id) const { return nodes.at(index(id)); }
  NodeState& node(int id) { return nodes.at(index(id)); }
  double distance(int a, int b) const { return net::distance(node(a).position, node(b).position); }

  bool has_node(int id) const { return id >= 1 && static_cast<std::size_t>(id) <= nodes.size(); }

  std::vector<int> sinks() const {
    std::vector<int> out;
    for (const auto& n : nodes)
      if (n.is_sink()) out.push_back(n.id);
    return out;
  }

  std::vector<int> origins() const {
    std::vector<int> out;
    for (const auto& n : nodes)
      if (n.is_origin()) out.push_back(n.id);
    return out;
  }

  // Copy with every CB/CT link removed.
  Network without_cbct() const {
    Network out = *this;
    std::erase_if(out.edges, [](const Edge& e) { return e.kind == EdgeKind::CbCt; });
    return out;
  }

  std::size_t count_edges(EdgeKind kind) const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.kind == kind; }));
  }

  void validate() const {
    params.validate();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      if (n.id != static_cast<int>(i + 1))
        throw DomainError("node ids must be 1..n in order; found id " + std::to_string(n.id) + " at position " + std::to_string(i + 1));
      if (!(n.energy_initial >= 0.0)) throw DomainError("node " + std::to_string(n.id) + ": initial energy must be >= 0");
      if (!(n.energy_remaining >= 0.0 && n.energy_remaining <= n.energy_initial))
        throw DomainError("node " + std::to_string(n.id) + ": remaining energy must lie in [0, initial]");
    }
    for (const auto& e : edges) {
      if (!has_node(e.src) || !has_node(e.dst) || e.src == e.dst)
        throw DomainError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " references an invalid node");
      if (e.kind == EdgeKind::Direct && !e.helpers.empty())
        throw DomainError("direct edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " must not have helpers");
      for (int h : e.helpers)
        if (!has_node(h) || h == e.src || h == e.dst)
          throw DomainError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) + " has invalid helper " + std::to_string(h));
    }
  }
};

// Flow totals per edge (aligned with Network::edges) and the lifetime they sustain.
struct FlowSolution {
  std::vector<double> qhat;
  double lifetime = 0.0;
};

// `n_nodes` sensors and `n_sinks` sinks placed uniformly in a side x side
// square. Sinks get ids 1..n_sinks; every sensor has unit energy and unit
// rate, and the sinks split the total inflow evenly.
inline Network generate_random(double side, int n_nodes, int n_sinks, std::uint64_t seed,
                               const link::ChannelParams& params = link::ChannelParams::defaults()) {
  if (n_nodes < 1) throw DomainError("generate_random: need at least one sensor node");
  if (n_sinks < 1) throw DomainError("generate_random: need at least one sink");
  if (!(side > 0.0)) throw DomainError("generate_random: side must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);
  Network net;
  net.params = params;
  const int total = n_nodes + n_sinks;
  const double sink_rate = -static_cast<double>(n_nodes) / static_cast<double>(n_sinks);
  for (int id = 1; id <= total; ++id) {
    NodeState n;
    n.id = id;
    n.position.x = coord(rng);
    n.position.y = coord(rng);
    n.energy_initial = n.energy_remaining = 1.0;
    n.rate = id <= n_sinks ? sink_rate : 1.0;
    net.nodes.push_back(n);
  }
  return net;
}

// Gain a source gets from one helper at distance `helper_distance`.
inline double pair_gain(const link::ChannelParams& p, CoopMode mode, double helper_distance) {
  if (mode == CoopMode::CT) return link::ct_gain_analytic(p, 2, helper_distance);
  return link::cb_gain_lower_bound(2, helper_distance, p.wavelength);
}

// Replaces the edge set from node positions.
//
// Direct links join every pair within A0. A CB/CT link i->m (i not a sink,
// dist > A0) recruits i's nearest non-sink neighbour j; it exists when j is
// within A0 of i and the pair gain lifts the SNR at m to gamma0.
inline Network build_edges(Network net, CoopMode mode) {
  net.validate();
  const auto& p = net.params;
  const double a0 = link::max_direct_range(p);
  const std::size_t n = net.size();
  std::vector<Edge> edges;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && distance(net.nodes[i].position, net.nodes[j].position) <= a0)
        edges.push_back({net.nodes[i].id, net.nodes[j].id, EdgeKind::Direct, {}});

  for (std::size_t i = 0; i < n; ++i) {
    const NodeState& src = net.nodes[i];
    if (src.is_sink()) continue;
    int helper = 0;
    double helper_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || net.nodes[j].is_sink()) continue;
      const double d = distance(src.position, net.nodes[j].position);
      if (d < helper_dist) {
        helper_dist = d;
        helper = net.nodes[j].id;
      }
    }
    if (helper == 0 || helper_dist > a0 || helper_dist <= 0.0) continue;

    double gain = 0.0;
    try {
      gain = pair_gain(p, mode, helper_dist);
    } catch (const DomainError&) {
      continue;
    }
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i || net.nodes[m].id == helper) continue;
      const double d = distance(src.position, net.nodes[m].position);
      if (d <= a0) continue;
      if (gain * link::snr_direct(p, d) >= p.gamma0)
        edges.push_back({src.id, net.nodes[m].id, EdgeKind::CbCt, {helper}});
    }
  }

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.src, a.dst, a.kind) < std::tie(b.src, b.dst, b.kind);
  });
  net.edges = std::move(edges);
  return net;
}

// Energy each node spends per unit of the given edge flows: its own
// transmissions plus every CB/CT transmission it helps with.
inline std::vector<double> node_energy_use(const Network& net, std::span<const double> flow) {
  if (flow.size() != net.edges.size()) throw DomainError("flow vector must have one entry per edge");
  std::vector<double> use(net.size(), 0.0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (flow[e] < 0.0) throw DomainError("negative flow on edge " + std::to_string(net.edges[e].src) + "->" + std::to_string(net.edges[e].dst));
    const Edge& edge = net.edges[e];
    use[net.index(edge.src)] += flow[e];
    for (int h : edge.helpers) use[net.index(h)] += flow[e];
  }
  return use;
}

// T_i = E_i / load_i for edge rates q; infinite for idle nodes.
inline std::vector<double> node_lifetime(const Network& net, std::span<const double> rates) {
  const auto load = node_energy_use(net, rates);
  std::vector<double> out(net.size());
  for (std::size_t i = 0; i < net.size(); ++i)
    out[i] = load[i] > 0.0 ? net.nodes[i].energy_initial / load[i] : std::numeric_limits<double>::infinity();
  return out;
}

// Origins with no directed path (any edge kind) to a sink. Edges out of
// sinks are ignored since sinks only absorb.
inline std::vector<int> unreachable_origins(const Network& net) {
  const std::size_t n = net.size();
  std::vector<std::vector<std::size_t>> reverse(n);
  for (const auto& e : net.edges) {
    if (net.node(e.src).is_sink()) continue;
    reverse[net.index(e.dst)].push_back(net.index(e.src));
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (net.nodes[i].is_sink()) {
      seen[i] = true;
      frontier.push(i);
    }
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t u : reverse[v])
      if (!seen[u]) {
        seen[u] = true;
        frontier.push(u);
      }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i)
    if (net.nodes[i].is_origin() && !seen[i]) out.push_back(net.nodes[i].id);
  return out;
}

}  // namespace wsnlife::net
