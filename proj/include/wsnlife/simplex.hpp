#pragma once

// Dense two-phase tableau simplex with Bland's rule.
//
// Solves   maximize c.x   subject to   A_i.x {<=, =, >=} b_i,  x >= 0.
// Meant for problems with at most a few thousand columns; every pivot touches
// the whole tableau.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnlife/errors.hpp"

namespace wsnlife::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct LpProblem {
  std::vector<double> objective;  // maximised
  std::vector<Constraint> rows;
  std::vector<std::string> var_names;

  std::size_t num_vars() const { return objective.size(); }

  void validate() const {
    if (!var_names.empty() && var_names.size() != objective.size())
      throw DomainError("LP: one name per variable required");
    for (const auto& r : rows)
      if (r.coeffs.size() != objective.size())
        throw DomainError("LP: row '" + r.name + "' has " + std::to_string(r.coeffs.size()) + " coefficients, expected " +
                          std::to_string(objective.size()));
  }

  std::string var_name(std::size_t j) const { return j < var_names.size() ? var_names[j] : "x" + std::to_string(j); }

  // Human-readable dump, one row per line.
  std::string dump() const {
    std::ostringstream out;
    out.precision(12);
    auto linear = [&](const std::vector<double>& c) {
      bool first = true;
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0.0) continue;
        out << (c[j] < 0.0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (std::abs(c[j]) != 1.0) out << std::abs(c[j]) << " ";
        out << var_name(j);
        first = false;
      }
      if (first) out << "0";
    };
    out << "maximize ";
    linear(objective);
    out << "\nsubject to\n";
    for (const auto& r : rows) {
      out << "  " << (r.name.empty() ? "row" : r.name) << ": ";
      linear(r.coeffs);
      out << (r.relation == Relation::LessEqual ? " <= " : r.relation == Relation::Equal ? " = " : " >= ") << r.rhs << "\n";
    }
    out << "  all variables >= 0\n";
    return out.str();
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;              // structural variables
  double objective = 0.0;
  std::vector<double> reduced_costs;  // z_j - c_j per structural variable, >= 0 at optimum
  std::vector<std::size_t> basis;     // tableau column per row at termination
  long pivots = 0;
};

namespace detail {

class Tableau {
public:
  Tableau(const LpProblem& prob, double tol) : tol_(tol), n_struct_(prob.num_vars()) {
    const std::size_t m = prob.rows.size();
    std::size_t n_slack = 0, n_art = 0;
    std::vector<Relation> rel(m);
    std::vector<double> sign(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      rel[i] = prob.rows[i].relation;
      if (prob.rows[i].rhs < 0.0) {
        sign[i] = -1.0;
        if (rel[i] == Relation::LessEqual)
          rel[i] = Relation::GreaterEqual;
        else if (rel[i] == Relation::GreaterEqual)
          rel[i] = Relation::LessEqual;
      }
      if (rel[i] != Relation::Equal) ++n_slack;
      if (rel[i] != Relation::LessEqual) ++n_art;
    }
    first_art_ = n_struct_ + n_slack;
    cols_ = first_art_ + n_art;
    rows_.assign(m, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m, 0);

    std::size_t slack = n_struct_, art = first_art_;
    for (std::size_t i = 0; i < m; ++i) {
      auto& row = rows_[i];
      for (std::size_t j = 0; j < n_struct_; ++j) row[j] = sign[i] * prob.rows[i].coeffs[j];
      row[cols_] = sign[i] * prob.rows[i].rhs;
      if (rel[i] == Relation::LessEqual) {
        row[slack] = 1.0;
        basis_[i] = slack++;
      } else {
        if (rel[i] == Relation::GreaterEqual) row[slack++] = -1.0;
        row[art] = 1.0;
        basis_[i] = art++;
      }
    }
  }

  bool is_artificial(std::size_t j) const { return j >= first_art_ && j < cols_; }
  bool has_artificials() const { return first_art_ < cols_; }

  // Loads objective `c` (maximised, indexed by tableau column) into the
  // reduced-cost row.
  void set_objective(const std::vector<double>& c) {
    cost_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) cost_[j] = -c[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] += cb * rows_[i][j];
    }
  }

  // Runs Bland's rule to optimality; `allow_artificial` gates entering columns.
  LpStatus optimize(bool allow_artificial, long& pivots) {
    constexpr long kMaxPivots = 1'000'000;
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (cost_[j] < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpStatus::Optimal;

      std::size_t leave = rows_.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const double a = rows_[i][enter];
        if (a <= tol_) continue;
        const double ratio = rows_[i][cols_] / a;
        if (ratio < best - tol_ || (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == rows_.size()) return LpStatus::Unbounded;
      pivot(leave, enter);
      if (++pivots > kMaxPivots) throw std::runtime_error("simplex: pivot limit exceeded");
    }
  }

  // After phase 1: pivot zero-valued artificials out of the basis, dropping
  // rows that are linear combinations of the others.
  void expel_artificials(long& pivots) {
    for (std::size_t i = 0; i < rows_.size();) {
      if (!is_artificial(basis_[i])) {
        ++i;
        continue;
      }
      std::size_t col = cols_;
      for (std::size_t j = 0; j < first_art_; ++j)
        if (std::abs(rows_[i][j]) > tol_) {
          col = j;
          break;
        }
      if (col == cols_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++pivots;
      ++i;
    }
  }

  double objective_value() const { return cost_[cols_]; }
  std::size_t columns() const { return cols_; }
  std::size_t structural() const { return n_struct_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  double reduced_cost(std::size_t j) const { return cost_[j]; }

  std::vector<double> structural_values() const {
    std::vector<double> x(n_struct_, 0.0);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n_struct_) x[basis_[i]] = std::max(0.0, rows_[i][cols_]);
    return x;
  }

private:
  void pivot(std::size_t r, std::size_t c) {
    auto& prow = rows_[r];
    const double inv = 1.0 / prow[c];
    for (double& v : prow) v *= inv;
    prow[c] = 1.0;
    auto eliminate = [&](std::vector<double>& row) {
      const double f = row[c];
      if (f == 0.0) return;
      for (std::size_t j = 0; j <= cols_; ++j) {
        row[j] -= f * prow[j];
        if (std::abs(row[j]) < 1e-13) row[j] = 0.0;
      }
      row[c] = 0.0;
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(cost_);
    basis_[r] = c;
  }

  double tol_;
  std::size_t n_struct_;
  std::size_t first_art_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Two-phase simplex. Phase 1 maximises minus the sum of artificials; a
// residual above `feas_tol` means infeasible.
inline LpResult solve_simplex(const LpProblem& prob, double pivot_tol = 1e-9, double feas_tol = 1e-8) {
  prob.validate();
  detail::Tableau tab(prob, pivot_tol);
  LpResult res;

  if (tab.has_artificials()) {
    std::vector<double> phase1(tab.columns(), 0.0);
    for (std::size_t j = 0; j < tab.columns(); ++j)
      if (tab.is_artificial(j)) phase1[j] = -1.0;
    tab.set_objective(phase1);
    tab.optimize(true, res.pivots);
    if (tab.objective_value() < -feas_tol) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    tab.expel_artificials(res.pivots);
  }

  std::vector<double> phase2(tab.columns(), 0.0);
  for (std::size_t j = 0; j < prob.num_vars(); ++j) phase2[j] = prob.objective[j];
  tab.set_objective(phase2);
  res.status = tab.optimize(false, res.pivots);
  res.x = tab.structural_values();
  res.basis = tab.basis();
  res.reduced_costs.resize(prob.num_vars());
  for (std::size_t j = 0; j < prob.num_vars(); ++j) res.reduced_costs[j] = tab.reduced_cost(j);
  if (res.status == LpStatus::Optimal) res.objective = tab.objective_value();
  else res.objective = std::numeric_limits<double>::infinity();
  return res;
}

}  // namespace wsnlife::lp
