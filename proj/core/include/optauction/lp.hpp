#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optauction/types.hpp"

namespace optauction::lp {

// Feasibility and optimality tolerance of the simplex.
inline constexpr double kTolerance = 1e-9;

// min cost . x  subject to  coverage * x >= demand,  0 <= x <= upper.
//
// Columns are sellers, rows are items. Upper bounds are handled implicitly by
// the solver (no slack rows for them).
struct CoveringLp {
  std::vector<double> cost;
  std::vector<double> upper;
  BinaryMatrix coverage;  // rows x cols, entries 0/1
  std::vector<double> demand;

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_rows() const { return demand.size(); }
};

enum class LpStatus { optimal, infeasible };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Bounded-variable primal simplex, two phases, Bland's rule for both the
// entering and the leaving choice. Deterministic: identical inputs give
// bitwise-identical results. Throws InvalidInputError for malformed problems
// and InternalError when the iteration cap 10 * (n + m)^2 is exceeded.
LpSolution solve(const CoveringLp& problem);

// As solve() with cost[var] replaced by `cost`.
LpSolution solve_with_modified_cost(const CoveringLp& problem, std::size_t var, double cost);

}  // namespace optauction::lp
