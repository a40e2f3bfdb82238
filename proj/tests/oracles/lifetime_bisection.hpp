#pragma once

// Max-min lifetime by bisection on T. Each fixed-T question "can the
// network carry T Q_i from every origin within its batteries?" is a
// feasibility problem, answered by a phase-1 simplex written here separately
// from the library solver: one artificial per row, Bland's rule, minimise the
// artificial sum.

#include <cmath>
#include <limits>
#include <vector>

#include "wsnlife/network.hpp"

namespace oracle {

// Feasibility of { A x (<= or =) b, x >= 0 }; rows flagged `equality`.
inline bool phase1_feasible(std::vector<std::vector<double>> a, std::vector<double> b, const std::vector<bool>& equality) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  // columns: n originals, one slack per inequality, one artificial per row
  std::size_t slacks = 0;
  for (bool eq : equality) slacks += eq ? 0 : 1;
  const std::size_t width = n + slacks + m;
  std::vector<std::vector<double>> t(m, std::vector<double>(width + 1, 0.0));
  std::vector<std::size_t> basic(m);
  std::size_t s = n;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    if (!equality[i]) t[i][s++] = 1.0;
    t[i][width] = b[i];
    if (b[i] < 0.0)
      for (double& v : t[i]) v = -v;
    t[i][n + slacks + i] = 1.0;
    basic[i] = n + slacks + i;
  }
  // objective: minimise sum of artificials; reduced cost d_j = -sum_i t[i][j] for non-artificial j
  std::vector<double> d(width + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= width; ++j)
      if (j < n + slacks || j == width) d[j] -= t[i][j];

  const double eps = 1e-10;
  for (int iter = 0; iter < 100000; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j)
      if (d[j] < -eps) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= eps) continue;
      const double r = t[i][width] / t[i][enter];
      if (r < ratio - eps || (r <= ratio + eps && leave < m && basic[i] < basic[leave])) {
        ratio = r;
        leave = i;
      }
    }
    if (leave == m) break;  // cannot happen for a bounded phase-1 objective
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j <= width; ++j) t[i][j] -= f * t[leave][j];
    }
    const double f = d[enter];
    for (std::size_t j = 0; j <= width; ++j) d[j] -= f * t[leave][j];
    basic[leave] = enter;
  }
  // d[width] = -(sum of artificials)
  return -d[width] < 1e-9;
}

inline bool lifetime_feasible(const wsnlife::net::Network& net, double lifetime) {
  std::vector<std::size_t> vars;
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (!net.node(net.edges[e].src).is_sink()) vars.push_back(e);
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<bool> eq;
  for (const auto& node : net.nodes) {
    std::vector<double> row(vars.size(), 0.0);
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& e = net.edges[vars[k]];
      if (e.src == node.id) row[k] += 1.0;
      for (int h : e.helpers)
        if (h == node.id) row[k] += 1.0;
    }
    a.push_back(row);
    b.push_back(node.energy_remaining);
    eq.push_back(false);
  }
  for (const auto& node : net.nodes) {
    if (node.rate < 0.0) continue;
    std::vector<double> row(vars.size(), 0.0);
    for (std::size_t k = 0; k < vars.size(); ++k) {
      const auto& e = net.edges[vars[k]];
      if (e.src == node.id) row[k] += 1.0;
      if (e.dst == node.id) row[k] -= 1.0;
    }
    a.push_back(row);
    b.push_back(lifetime * node.rate);
    eq.push_back(true);
  }
  return phase1_feasible(a, b, eq);
}

inline double lifetime_by_bisection(const wsnlife::net::Network& net, double tol = 1e-9) {
  double energy = 0.0, rate = 0.0;
  for (const auto& node : net.nodes) {
    if (node.rate < 0.0) continue;
    energy += node.energy_remaining;
    rate += node.rate;
  }
  double lo = 0.0, hi = energy / rate + 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (lifetime_feasible(net, mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
