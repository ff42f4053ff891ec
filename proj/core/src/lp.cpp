#include "optauction/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optauction/error.hpp"

namespace optauction::lp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_well_formed(const CoveringLp& p) {
  const std::size_t n = p.num_vars();
  if (p.upper.size() != n) throw InvalidInputError("lp: upper bounds size mismatch");
  if (p.coverage.size() != p.num_rows()) throw InvalidInputError("lp: coverage row count mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.cost[i])) throw InvalidInputError("lp: non-finite cost");
    if (!(p.upper[i] >= 0.0) || !std::isfinite(p.upper[i]))
      throw InvalidInputError("lp: upper bounds must be finite and >= 0");
  }
  for (std::size_t j = 0; j < p.num_rows(); ++j) {
    if (p.coverage[j].size() != n) throw InvalidInputError("lp: coverage column count mismatch");
    for (auto e : p.coverage[j]) {
      if (e > 1) throw InvalidInputError("lp: coverage entries must be 0 or 1");
    }
    if (!(p.demand[j] >= 0.0) || !std::isfinite(p.demand[j]))
      throw InvalidInputError("lp: demands must be finite and >= 0");
  }
}

// Tableau form of  A z = b  with z = (x, surplus, artificial):
//   coverage * x - surplus + artificial = demand.
// Nonbasic variables sit at one of their bounds; basic values are recovered
// from the pivoted right-hand side.
class BoundedSimplex {
 public:
  BoundedSimplex(std::span<const double> cost, const CoveringLp& p) : n_(p.num_vars()) {
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < p.num_rows(); ++j) {
      if (p.demand[j] > 0.0) rows.push_back(j);
    }
    m_ = rows.size();
    cols_ = n_ + 2 * m_;
    tab_.assign(m_ * cols_, 0.0);
    rhs_.resize(m_);
    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, kInf);
    at_upper_.assign(cols_, 0);
    basis_.resize(m_);
    cost_.assign(cols_, 0.0);

    for (std::size_t i = 0; i < n_; ++i) {
      upper_[i] = p.upper[i];
      cost_[i] = cost[i];
    }
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t j = rows[r];
      for (std::size_t i = 0; i < n_; ++i) at(r, i) = p.coverage[j][i];
      at(r, n_ + r) = -1.0;
      at(r, n_ + m_ + r) = 1.0;
      rhs_[r] = p.demand[j];
      basis_[r] = n_ + m_ + r;
      max_demand_ = std::max(max_demand_, p.demand[j]);
    }
    const std::size_t size = n_ + m_;
    cap_ = static_cast<int>(10 * size * size);
  }

  LpSolution run() {
    LpSolution sol;
    beta_.resize(m_);

    // Phase 1: drive the artificials to zero.
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) phase1[n_ + m_ + r] = 1.0;
    while (iterate(phase1)) {
    }
    compute_basic_values();
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_ + m_) infeasibility += std::max(0.0, beta_[r]);
    }
    sol.iterations = iterations_;
    if (infeasibility > kTolerance * std::max(1.0, max_demand_)) {
      sol.status = LpStatus::infeasible;
      return sol;
    }

    // Phase 2: artificials are pinned to zero and never re-enter.
    for (std::size_t r = 0; r < m_; ++r) upper_[n_ + m_ + r] = 0.0;
    while (iterate(cost_)) {
    }
    compute_basic_values();

    sol.status = LpStatus::optimal;
    sol.iterations = iterations_;
    sol.x.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) sol.x[i] = snap(i, value_of(i));
    sol.objective = 0.0;
    for (std::size_t i = 0; i < n_; ++i) sol.objective += cost_[i] * sol.x[i];
    return sol;
  }

 private:
  double& at(std::size_t r, std::size_t c) { return tab_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return tab_[r * cols_ + c]; }

  bool is_basic(std::size_t k) const {
    return std::find(basis_.begin(), basis_.end(), k) != basis_.end();
  }

  double bound_value(std::size_t k) const { return at_upper_[k] ? upper_[k] : lower_[k]; }

  double value_of(std::size_t k) const {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] == k) return beta_[r];
    }
    return bound_value(k);
  }

  double snap(std::size_t k, double v) const {
    const double tol = kTolerance * std::max(1.0, std::abs(upper_[k]));
    if (std::abs(v - lower_[k]) <= tol) return lower_[k];
    if (std::isfinite(upper_[k]) && std::abs(v - upper_[k]) <= tol) return upper_[k];
    return v;
  }

  void compute_basic_values() {
    for (std::size_t r = 0; r < m_; ++r) beta_[r] = rhs_[r];
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!at_upper_[k] || is_basic(k)) continue;  // lower bounds are all zero
      const double v = upper_[k];
      for (std::size_t r = 0; r < m_; ++r) beta_[r] -= at(r, k) * v;
    }
  }

  double reduced_cost(std::span<const double> c, std::size_t k) const {
    double d = c[k];
    for (std::size_t r = 0; r < m_; ++r) d -= c[basis_[r]] * at(r, k);
    return d;
  }

  // One Bland iteration. Returns false at optimality.
  bool iterate(std::span<const double> c) {
    if (++iterations_ > cap_) {
      throw InternalError("lp: iteration cap " + std::to_string(cap_) +
                          " exceeded (numerical cycling guard)");
    }
    compute_basic_values();

    // Entering: lowest index with an improving reduced cost.
    std::size_t enter = kNone;
    double direction = 0.0;
    for (std::size_t k = 0; k < cols_; ++k) {
      if (upper_[k] - lower_[k] <= 0.0 || is_basic(k)) continue;
      const double d = reduced_cost(c, k);
      if (!at_upper_[k] && d < -kTolerance) {
        enter = k;
        direction = 1.0;
        break;
      }
      if (at_upper_[k] && d > kTolerance) {
        enter = k;
        direction = -1.0;
        break;
      }
    }
    if (enter == kNone) return false;

    // Ratio test. Candidates are the entering variable's own bound flip and
    // every blocking basic variable; ties go to the lowest variable index.
    double best = upper_[enter] - lower_[enter];
    std::size_t leave_var = std::isfinite(best) ? enter : kNone;
    std::size_t leave_row = kNone;
    bool leave_to_upper = false;
    auto consider = [&](double limit, std::size_t var, std::size_t row, bool to_upper) {
      limit = std::max(0.0, limit);
      const double slack = 1e-12 * std::max(1.0, std::abs(best));
      if (leave_var == kNone || limit < best - slack ||
          (limit <= best + slack && var < leave_var)) {
        best = limit;
        leave_var = var;
        leave_row = row;
        leave_to_upper = to_upper;
      }
    };
    for (std::size_t r = 0; r < m_; ++r) {
      const double alpha = direction * at(r, enter);
      const std::size_t b = basis_[r];
      if (alpha > kTolerance) {
        consider((beta_[r] - lower_[b]) / alpha, b, r, false);
      } else if (alpha < -kTolerance && std::isfinite(upper_[b])) {
        consider((upper_[b] - beta_[r]) / -alpha, b, r, true);
      }
    }
    if (leave_var == kNone) throw InternalError("lp: unbounded direction in a bounded problem");

    if (leave_var == enter) {
      at_upper_[enter] = !at_upper_[enter];
      return true;
    }
    pivot(leave_row, enter);
    at_upper_[leave_var] = leave_to_upper ? 1 : 0;
    at_upper_[enter] = 0;
    return true;
  }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t k = 0; k < cols_; ++k) at(row, k) /= p;
    rhs_[row] /= p;
    at(row, col) = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = at(r, col);
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < cols_; ++k) at(r, k) -= f * at(row, k);
      rhs_[r] -= f * rhs_[row];
      at(r, col) = 0.0;
    }
    basis_[row] = col;
  }

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> tab_;
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<char> at_upper_;
  std::vector<std::size_t> basis_;
  std::vector<double> beta_;
  double max_demand_ = 0.0;
  int iterations_ = 0;
  int cap_ = 0;
};

}  // namespace

LpSolution solve(const CoveringLp& problem) {
  check_well_formed(problem);
  return BoundedSimplex(problem.cost, problem).run();
}

LpSolution solve_with_modified_cost(const CoveringLp& problem, std::size_t var, double cost) {
  check_well_formed(problem);
  if (var >= problem.num_vars()) throw InvalidInputError("lp: variable index out of range");
  if (!std::isfinite(cost)) throw InvalidInputError("lp: non-finite cost");
  std::vector<double> c = problem.cost;
  c[var] = cost;
  return BoundedSimplex(c, problem).run();
}

}  // namespace optauction::lp
