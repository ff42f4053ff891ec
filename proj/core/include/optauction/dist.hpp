#pragma once

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "optauction/types.hpp"

namespace optauction::dist {

using Rng = std::mt19937_64;

// Relative tolerance used by the lattice regularity checks.
inline constexpr double kRegularityTolerance = 1e-12;

// ---------------------------------------------------------------------------
// Joint (cost, capacity) distributions of single-minded sellers.
// ---------------------------------------------------------------------------

// Cost ~ U[cost.lo, cost.hi] independent of capacity ~ U[capacity.lo, capacity.hi].
struct IndependentUniform {
  friend bool operator==(const IndependentUniform&, const IndependentUniform&) = default;
};

// Capacity ~ U[capacity]; given q, cost ~ U[cost.lo, cost.hi - slope * (q - capacity.lo)].
// Larger sellers are cheaper.
struct CapacityLinkedUniform {
  double slope = 0.0;
  friend bool operator==(const CapacityLinkedUniform&, const CapacityLinkedUniform&) = default;
};

// Piecewise-constant joint density. The cost and capacity ranges are cut into
// equal-width cells; mass[row][col] is the probability of capacity cell `row`
// and cost cell `col`. Inside a cell the density is uniform, so the
// conditional CDF is piecewise linear in cost and equals the cumulative row
// mass at the right edge of each cost cell.
struct TabulatedGrid {
  std::vector<std::vector<double>> mass;
  friend bool operator==(const TabulatedGrid&, const TabulatedGrid&) = default;
};

using Family = std::variant<IndependentUniform, CapacityLinkedUniform, TabulatedGrid>;

struct DistributionSpec {
  Interval cost;
  Interval capacity;
  Family family;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct Type {
  double cost = 0.0;
  double capacity = 0.0;
};

// Structural problems with a spec (inverted ranges, bad parameters, masses
// that do not sum to one). Empty when the spec is usable.
std::vector<std::string> distribution_problems(const DistributionSpec& spec);

// Support of the cost given capacity q. Throws DomainError when q is outside
// the capacity range.
Interval conditional_cost_support(const DistributionSpec& spec, double q);

// F(c | q). Throws DomainError outside the support.
double conditional_cdf(const DistributionSpec& spec, double c, double q);

// f(c | q). Throws DomainError outside the support.
double conditional_density(const DistributionSpec& spec, double c, double q);

// H(c, q) = c + F(c|q) / f(c|q). Throws SingularityError where f(c|q) = 0.
double virtual_cost(const DistributionSpec& spec, double c, double q);

struct LatticePoint {
  double cost = 0.0;
  double capacity = 0.0;
  double value = 0.0;
};

// First pair of lattice points at which monotonicity breaks.
struct RegularityViolation {
  enum class Axis { cost, capacity, singular };
  Axis axis = Axis::cost;
  LatticePoint first;
  LatticePoint second;
  std::string describe() const;
};

struct RegularityReport {
  bool regular = true;
  std::optional<RegularityViolation> violation;
};

// Samples H on a grid_resolution x grid_resolution lattice over the support
// and checks that it is non-decreasing in cost along every capacity row and
// non-increasing in capacity along every cost column. Lattice points outside
// the conditional support are skipped.
RegularityReport is_regular(const DistributionSpec& spec, int grid_resolution);

Type sample_type(const DistributionSpec& spec, Rng& rng);

// ---------------------------------------------------------------------------
// One-dimensional distributions: XOR bundle costs and single-item valuations.
// ---------------------------------------------------------------------------

struct UniformShape {
  friend bool operator==(const UniformShape&, const UniformShape&) = default;
};

// Equal-width histogram density over the support.
struct HistogramShape {
  std::vector<double> mass;
  friend bool operator==(const HistogramShape&, const HistogramShape&) = default;
};

struct UnivariateSpec {
  Interval support;
  std::variant<UniformShape, HistogramShape> shape;

  friend bool operator==(const UnivariateSpec&, const UnivariateSpec&) = default;
};

std::vector<std::string> distribution_problems(const UnivariateSpec& spec);

double cdf(const UnivariateSpec& spec, double x);
double density(const UnivariateSpec& spec, double x);

// Procurement virtual cost c + F(c) / f(c).
double virtual_cost(const UnivariateSpec& spec, double c);

// Forward-auction virtual valuation v - (1 - F(v)) / f(v).
double virtual_value(const UnivariateSpec& spec, double v);

// Non-decreasing check of virtual_cost (or virtual_value) on an even lattice.
RegularityReport is_regular_cost(const UnivariateSpec& spec, int grid_resolution);
RegularityReport is_regular_value(const UnivariateSpec& spec, int grid_resolution);

double sample(const UnivariateSpec& spec, Rng& rng);

}  // namespace optauction::dist
