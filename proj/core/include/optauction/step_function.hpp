#pragma once

#include <functional>
#include <span>
#include <vector>

namespace optauction {

// Piecewise-constant function on [breakpoints.front(), breakpoints.back()].
// Segment k spans [breakpoints[k], breakpoints[k+1]) and takes levels[k];
// the right end of the domain belongs to the last segment.
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> levels);

  // Constant `level` over [lo, hi].
  static StepFunction constant(double lo, double hi, double level);

  double lo() const { return breakpoints_.front(); }
  double hi() const { return breakpoints_.back(); }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> levels() const { return levels_; }
  std::size_t segments() const { return levels_.size(); }

  double operator()(double t) const;

  // Exact integral over [a, b] ∩ domain as sum of level * overlap width.
  double integral(double a, double b) const;

  bool is_non_increasing(double tol = 0.0) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> levels_;
};

struct TraceOptions {
  int scan_steps = 256;          // coarse scan resolution
  double resolution = 1e-9;      // bisection stops below this width
  double level_tolerance = 1e-7; // relative tolerance for "same level"
  bool require_non_increasing = true;
};

// Reconstructs a piecewise-constant function of one variable on [lo, hi]
// from point evaluations: a coarse scan at scan_steps equal steps, then
// bisection on every detected level change (recursively, so several changes
// inside one scan step are all found). Breakpoints are placed at the midpoint
// of the final bisection bracket. With require_non_increasing set, a rise
// throws MonotonicityError carrying the two costs that bracket it.
StepFunction trace_step_function(const std::function<double(double)>& f, double lo,
                                 double hi, const TraceOptions& options = {});

bool same_level(double a, double b, double rel_tol);

}  // namespace optauction
