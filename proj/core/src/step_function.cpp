#include "optauction/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> levels)
    : breakpoints_(std::move(breakpoints)), levels_(std::move(levels)) {
  if (levels_.empty() || breakpoints_.size() != levels_.size() + 1) {
    throw InvalidInputError("step function needs one more breakpoint than levels");
  }
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] <= breakpoints_[k + 1])) {
      throw InvalidInputError("step function breakpoints must be non-decreasing");
    }
  }
}

StepFunction StepFunction::constant(double lo, double hi, double level) {
  return StepFunction({lo, hi}, {level});
}

double StepFunction::operator()(double t) const {
  if (t < lo() || t > hi()) throw DomainError("step function evaluated outside its domain");
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
  k = k == 0 ? 0 : k - 1;
  return levels_[std::min(k, levels_.size() - 1)];
}

double StepFunction::integral(double a, double b) const {
  a = std::max(a, lo());
  b = std::min(b, hi());
  if (!(a < b)) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    const double l = std::max(a, breakpoints_[k]);
    const double r = std::min(b, breakpoints_[k + 1]);
    if (r > l) sum += levels_[k] * (r - l);
  }
  return sum;
}

bool StepFunction::is_non_increasing(double tol) const {
  for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
    if (levels_[k + 1] > levels_[k] + tol) return false;
  }
  return true;
}

bool same_level(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace {

class Tracer {
 public:
  Tracer(const std::function<double(double)>& f, const TraceOptions& o) : f_(f), o_(o) {}

  void start(double lo, double v) {
    breaks_.push_back(lo);
    levels_.push_back(v);
  }

  // f(l) = vl (the current last level) and f(r) = vr differ: locate every
  // change inside (l, r].
  void refine(double l, double vl, double r, double vr) {
    while (!same_level(vl, vr, o_.level_tolerance)) {
      double hi = r, vhi = vr;
      double lo = l;
      while (hi - lo > o_.resolution) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double vm = f_(mid);
        if (same_level(vm, vl, o_.level_tolerance)) {
          lo = mid;
        } else {
          hi = mid;
          vhi = vm;
        }
      }
      check_order(lo, vl, hi, vhi);
      breaks_.push_back(lo + 0.5 * (hi - lo));
      levels_.push_back(vhi);
      l = hi;
      vl = vhi;
    }
  }

  StepFunction finish(double hi) {
    breaks_.push_back(hi);
    // Collapse zero-width segments that bisection can leave at the very end.
    std::vector<double> b{breaks_.front()};
    std::vector<double> v;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
      if (breaks_[k + 1] <= breaks_[k]) continue;
      v.push_back(levels_[k]);
      b.push_back(breaks_[k + 1]);
    }
    if (v.empty()) return StepFunction::constant(breaks_.front(), breaks_.back(), levels_.back());
    return StepFunction(std::move(b), std::move(v));
  }

 private:
  void check_order(double l, double vl, double r, double vr) const {
    if (!o_.require_non_increasing) return;
    if (vr > vl && !same_level(vl, vr, o_.level_tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "allocation rises from " << vl << " at cost " << l << " to " << vr
          << " at cost " << r;
      throw MonotonicityError(msg.str(), l, r);
    }
  }

  const std::function<double(double)>& f_;
  const TraceOptions& o_;
  std::vector<double> breaks_;
  std::vector<double> levels_;
};

}  // namespace

StepFunction trace_step_function(const std::function<double(double)>& f, double lo,
                                 double hi, const TraceOptions& options) {
  if (!(lo <= hi)) throw InvalidInputError("trace: empty interval");
  const int steps = std::max(1, options.scan_steps);
  Tracer tracer(f, options);
  double prev_t = lo;
  double prev_v = f(lo);
  tracer.start(lo, prev_v);
  if (hi == lo) return tracer.finish(hi);
  for (int k = 1; k <= steps; ++k) {
    const double t = k == steps ? hi : lo + (hi - lo) * static_cast<double>(k) / steps;
    const double v = f(t);
    if (!same_level(prev_v, v, options.level_tolerance)) {
      tracer.refine(prev_t, prev_v, t, v);
    }
    prev_t = t;
    prev_v = v;
  }
  return tracer.finish(hi);
}

}  // namespace optauction
