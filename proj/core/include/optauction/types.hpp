#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace optauction {

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v, double tol = 0.0) const {
    return v >= lo - tol && v <= hi + tol;
  }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  // Point k of an evenly spaced lattice with `points` points (points >= 2).
  double lattice(int k, int points) const {
    if (k == points - 1) return hi;
    return lo + width() * static_cast<double>(k) / static_cast<double>(points - 1);
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Dense 0/1 matrix stored row-major as nested vectors; rows are items.
using BinaryMatrix = std::vector<std::vector<std::uint8_t>>;

}  // namespace optauction
