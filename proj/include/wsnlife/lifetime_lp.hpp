#pragma once

// Max-min network lifetime as a linear program.
//
// With qhat_e = T q_e the total traffic an edge carries over the lifetime T,
//   maximize T
//   s.t. sum_{e out of i} qhat_e + sum_{e helped by i} qhat_e <= E_i   (energy, every node)
//        sum_{e into i} qhat_e + T Q_i = sum_{e out of i} qhat_e       (conservation, non-sinks)
//        qhat, T >= 0.
// Edges leaving a sink get no variable: sinks only absorb.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wsnlife/errors.hpp"
#include "wsnlife/network.hpp"
#include "wsnlife/simplex.hpp"

namespace wsnlife::lifetime {

inline constexpr std::size_t kNoVariable = std::numeric_limits<std::size_t>::max();

struct LifetimeLp {
  lp::LpProblem problem;
  std::vector<std::size_t> edge_var;  // per network edge; kNoVariable for edges out of sinks
  std::size_t lifetime_var = 0;
};

inline std::string edge_label(const net::Edge& e) {
  std::string s = "q_" + std::to_string(e.src) + "_" + std::to_string(e.dst);
  if (e.kind == net::EdgeKind::CbCt) {
    s += "_via";
    for (int h : e.helpers) s += "_" + std::to_string(h);
  }
  return s;
}

inline LifetimeLp formulate(const net::Network& net) {
  net.validate();
  if (const auto lost = unreachable_origins(net); !lost.empty()) {
    std::ostringstream msg;
    msg << "disconnected origin: node" << (lost.size() > 1 ? "s" : "");
    for (int id : lost) msg << " " << id;
    msg << " cannot reach any sink";
    throw ModelError(msg.str());
  }

  LifetimeLp out;
  auto& prob = out.problem;
  out.edge_var.assign(net.edges.size(), kNoVariable);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (net.node(net.edges[e].src).is_sink()) continue;
    out.edge_var[e] = prob.var_names.size();
    prob.var_names.push_back(edge_label(net.edges[e]));
  }
  out.lifetime_var = prob.var_names.size();
  prob.var_names.push_back("T");
  const std::size_t nv = prob.var_names.size();
  prob.objective.assign(nv, 0.0);
  prob.objective[out.lifetime_var] = 1.0;

  for (const auto& node : net.nodes) {
    lp::Constraint row;
    row.coeffs.assign(nv, 0.0);
    row.relation = lp::Relation::LessEqual;
    row.rhs = node.energy_remaining;
    row.name = "energy_" + std::to_string(node.id);
    bool any = false;
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const std::size_t v = out.edge_var[e];
      if (v == kNoVariable) continue;
      const auto& edge = net.edges[e];
      if (edge.src == node.id) {
        row.coeffs[v] += 1.0;
        any = true;
      }
      for (int h : edge.helpers)
        if (h == node.id) {
          row.coeffs[v] += 1.0;
          any = true;
        }
    }
    if (any) prob.rows.push_back(std::move(row));
  }

  for (const auto& node : net.nodes) {
    if (node.is_sink()) continue;
    lp::Constraint row;
    row.coeffs.assign(nv, 0.0);
    row.relation = lp::Relation::Equal;
    row.rhs = 0.0;
    row.name = "flow_" + std::to_string(node.id);
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const std::size_t v = out.edge_var[e];
      if (v == kNoVariable) continue;
      if (net.edges[e].dst == node.id) row.coeffs[v] += 1.0;
      if (net.edges[e].src == node.id) row.coeffs[v] -= 1.0;
    }
    row.coeffs[out.lifetime_var] = node.rate;
    prob.rows.push_back(std::move(row));
  }
  return out;
}

struct LifetimeResult {
  lp::LpStatus status = lp::LpStatus::Infeasible;
  net::FlowSolution flow;           // qhat aligned with Network::edges
  bool infinite = false;            // no traffic to carry
  std::vector<double> reduced_costs;
};

namespace detail {

// load_i = sum of flows node i sends or helps with, as a row over the edge variables.
inline std::vector<std::vector<double>> load_rows(const LifetimeLp& f, const net::Network& net) {
  const std::size_t ne = f.lifetime_var;
  std::vector<std::vector<double>> rows(net.size(), std::vector<double>(ne, 0.0));
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const std::size_t v = f.edge_var[e];
    if (v == kNoVariable) continue;
    rows[net.index(net.edges[e].src)][v] += 1.0;
    for (int h : net.edges[e].helpers) rows[net.index(h)][v] += 1.0;
  }
  return rows;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * x[j];
  return s;
}

// Flows with T held at `lifetime`: conservation rows, frozen nodes capped at
// level_i E_i, active nodes capped at u E_i. With `u_var` the last column is u.
inline lp::LpProblem stage_problem(const LifetimeLp& f, const net::Network& net, double lifetime,
                                   const std::vector<std::vector<double>>& loads, const std::vector<double>& level,
                                   const std::vector<bool>& active, bool u_var, double u_fixed) {
  const std::size_t ne = f.lifetime_var;
  const std::size_t nv = ne + (u_var ? 1 : 0);
  lp::LpProblem prob;
  prob.objective.assign(nv, 0.0);
  for (const auto& row : f.problem.rows) {
    if (row.relation != lp::Relation::Equal) continue;
    lp::Constraint c;
    c.coeffs.assign(row.coeffs.begin(), row.coeffs.begin() + static_cast<std::ptrdiff_t>(ne));
    c.coeffs.resize(nv, 0.0);
    c.relation = lp::Relation::Equal;
    c.rhs = -row.coeffs[f.lifetime_var] * lifetime;
    prob.rows.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.nodes[i].is_sink()) continue;
    const double e = net.nodes[i].energy_remaining;
    lp::Constraint c;
    c.coeffs = loads[i];
    c.coeffs.resize(nv, 0.0);
    c.relation = lp::Relation::LessEqual;
    if (!active[i]) {
      c.rhs = level[i] * e;
    } else if (u_var) {
      c.coeffs[ne] = -e;
      c.rhs = 0.0;
    } else {
      c.rhs = u_fixed * e;
    }
    prob.rows.push_back(std::move(c));
  }
  return prob;
}

// Among flows achieving `lifetime`, the one whose node loads (relative to
// remaining energy) are max-min fair: repeatedly minimise the worst load of
// the nodes not yet fixed, then fix the nodes that sit at that level in every
// such flow.
inline std::vector<double> balance_loads(const LifetimeLp& f, const net::Network& net, double lifetime,
                                         std::vector<double> x) {
  const std::size_t ne = f.lifetime_var;
  const auto loads = load_rows(f, net);
  const std::size_t n = net.size();
  std::vector<double> level(n, 1.0);
  std::vector<bool> active(n, false);
  std::size_t remaining = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (net.nodes[i].is_sink()) continue;
    if (net.nodes[i].energy_remaining > 0.0) {
      active[i] = true;
      ++remaining;
    } else {
      level[i] = 0.0;
    }
  }
  auto tol = [&](std::size_t i) { return 1e-9 * std::max(1.0, net.nodes[i].energy_remaining); };

  double u = 1.0;
  while (remaining > 0) {
    std::vector<std::size_t> freeze, tight;
    for (std::size_t j = 0; j < n; ++j) {
      if (!active[j]) continue;
      const double cap = u * net.nodes[j].energy_remaining;
      if (dot(loads[j], x) < cap - tol(j)) continue;
      tight.push_back(j);
      lp::LpProblem check = stage_problem(f, net, lifetime, loads, level, active, false, u);
      for (std::size_t k = 0; k < ne; ++k) check.objective[k] = -loads[j][k];
      const auto r = lp::solve_simplex(check);
      if (r.status == lp::LpStatus::Optimal && -r.objective >= cap - tol(j)) freeze.push_back(j);
    }
    if (freeze.empty()) freeze = tight;  // numerical fallback; guarantees progress
    if (freeze.empty()) break;
    for (std::size_t j : freeze) {
      active[j] = false;
      level[j] = u;
      --remaining;
    }
    if (remaining == 0) break;

    lp::LpProblem stage = stage_problem(f, net, lifetime, loads, level, active, true, 0.0);
    stage.objective[ne] = -1.0;
    const auto r = lp::solve_simplex(stage);
    if (r.status != lp::LpStatus::Optimal) break;  // keep the last feasible flows
    x.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(ne));
    u = r.x[ne];
  }
  return x;
}

}  // namespace detail

// Solves for the maximum lifetime. With `balance`, ties among optimal flows
// are broken toward max-min fair node loads, so the reported flows do not
// depend on the pivoting path.
inline LifetimeResult solve(const LifetimeLp& lp_form, const net::Network& net, bool balance = true) {
  const lp::LpResult r = lp::solve_simplex(lp_form.problem);
  LifetimeResult out;
  out.status = r.status;
  out.reduced_costs = r.reduced_costs;
  out.flow.qhat.assign(net.edges.size(), 0.0);
  if (r.status == lp::LpStatus::Infeasible)
    throw ModelError("lifetime LP is infeasible; zero flow with T = 0 should always be feasible");
  if (r.status == lp::LpStatus::Unbounded) {
    if (!net.origins().empty()) throw ModelError("lifetime LP is unbounded although the network carries traffic");
    out.infinite = true;
    out.flow.lifetime = std::numeric_limits<double>::infinity();
    return out;
  }
  out.flow.lifetime = r.x[lp_form.lifetime_var];
  std::vector<double> x(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(lp_form.lifetime_var));
  if (balance && out.flow.lifetime > 0.0) x = detail::balance_loads(lp_form, net, out.flow.lifetime, std::move(x));
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (lp_form.edge_var[e] != kNoVariable) out.flow.qhat[e] = x[lp_form.edge_var[e]];
  return out;
}

inline LifetimeResult solve_lifetime(const net::Network& net, bool balance = true) {
  return solve(formulate(net), net, balance);
}

struct GainResult {
  LifetimeResult with_cbct;
  LifetimeResult without_cbct;
  double gain = 0.0;          // T_with / T_without - 1
  bool infinite_gain = false;
};

// Lifetime with and without the CB/CT links of `net`.
inline GainResult lifetime_gain(const net::Network& net) {
  GainResult g;
  g.with_cbct = solve_lifetime(net);
  const net::Network plain = net.without_cbct();
  try {
    g.without_cbct = solve_lifetime(plain);
  } catch (const ModelError&) {
    // Some origin only reaches a sink through CB/CT.
    g.without_cbct.status = lp::LpStatus::Optimal;
    g.without_cbct.flow.qhat.assign(plain.edges.size(), 0.0);
    g.without_cbct.flow.lifetime = 0.0;
  }
  const double tw = g.with_cbct.flow.lifetime, to = g.without_cbct.flow.lifetime;
  if (g.with_cbct.infinite && g.without_cbct.infinite)
    g.gain = 0.0;
  else if (to == 0.0) {
    g.infinite_gain = true;
    g.gain = std::numeric_limits<double>::infinity();
  } else
    g.gain = tw / to - 1.0;
  return g;
}

struct FlowAudit {
  double max_energy_excess = 0.0;        // max_i (use_i - E_i), clipped at 0
  double max_conservation_error = 0.0;   // max over non-sinks
  double min_negative_flow = 0.0;
  double min_node_lifetime = std::numeric_limits<double>::infinity();  // with rates qhat / T
  bool ok = false;
};

// Re-checks a solution against the constraints without touching the solver.
inline FlowAudit audit(const net::Network& net, const net::FlowSolution& sol, double tol = 1e-6) {
  FlowAudit a;
  for (double q : sol.qhat) a.min_negative_flow = std::min(a.min_negative_flow, q);
  std::vector<double> clipped(sol.qhat.size());
  std::transform(sol.qhat.begin(), sol.qhat.end(), clipped.begin(), [](double q) { return std::max(q, 0.0); });

  const auto use = net::node_energy_use(net, clipped);
  for (std::size_t i = 0; i < net.size(); ++i)
    a.max_energy_excess = std::max(a.max_energy_excess, use[i] - net.nodes[i].energy_remaining);

  std::vector<double> balance(net.size(), 0.0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    balance[net.index(net.edges[e].dst)] += clipped[e];
    balance[net.index(net.edges[e].src)] -= clipped[e];
  }
  const double t = std::isfinite(sol.lifetime) ? sol.lifetime : 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.nodes[i].is_sink()) continue;
    a.max_conservation_error = std::max(a.max_conservation_error, std::abs(balance[i] + t * net.nodes[i].rate));
  }

  if (t > 0.0) {
    std::vector<double> rates(clipped.size());
    std::transform(clipped.begin(), clipped.end(), rates.begin(), [&](double q) { return q / t; });
    const auto life = net::node_lifetime(net, rates);
    a.min_node_lifetime = *std::min_element(life.begin(), life.end());
  }
  a.ok = a.max_energy_excess <= tol && a.max_conservation_error <= tol && a.min_negative_flow >= -tol;
  return a;
}

}  // namespace wsnlife::lifetime
