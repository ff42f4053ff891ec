#include "optauction/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction::dist {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double unit_uniform(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_uniform(rng);
}

double domain_slack(const Interval& range) {
  return 1e-12 * std::max({1.0, std::abs(range.lo), std::abs(range.hi)});
}

// Index of the equal-width cell containing x. A point on an interior edge
// belongs to the cell on its left; the lower end belongs to cell 0.
std::size_t cell_of(const Interval& range, std::size_t cells, double x) {
  const double w = range.width() / static_cast<double>(cells);
  if (w <= 0.0) return 0;
  const double t = (x - range.lo) / w;
  const double k = std::ceil(t) - 1.0;
  if (k <= 0.0) return 0;
  return std::min(cells - 1, static_cast<std::size_t>(k));
}

std::string point_text(double c, double q) {
  std::ostringstream out;
  out.precision(17);
  out << "(c=" << c << ", q=" << q << ")";
  return out.str();
}

void require_capacity(const DistributionSpec& spec, double q) {
  if (!spec.capacity.contains(q, domain_slack(spec.capacity))) {
    throw DomainError("capacity outside distribution support at " +
                      point_text(std::nan(""), q));
  }
}

double require_cost(const Interval& support, double c, double q) {
  if (!support.contains(c, domain_slack(support))) {
    throw DomainError("cost outside conditional support at " + point_text(c, q));
  }
  return std::clamp(c, support.lo, support.hi);
}

double row_total(const std::vector<double>& row) {
  return std::accumulate(row.begin(), row.end(), 0.0);
}

const std::vector<double>& grid_row(const DistributionSpec& spec,
                                    const TabulatedGrid& grid, double q) {
  const auto& row = grid.mass[cell_of(spec.capacity, grid.mass.size(), q)];
  if (row_total(row) <= 0.0) {
    throw DomainError("capacity row carries no mass at " + point_text(std::nan(""), q));
  }
  return row;
}

// Piecewise-linear CDF and piecewise-constant density of a histogram.
struct CellEval {
  double cdf;
  double density;
};

CellEval histogram_eval(const Interval& range, const std::vector<double>& mass,
                        double x) {
  const double total = row_total(mass);
  const std::size_t k = cell_of(range, mass.size(), x);
  const double w = range.width() / static_cast<double>(mass.size());
  const double left_edge = range.lo + w * static_cast<double>(k);
  double below = 0.0;
  for (std::size_t i = 0; i < k; ++i) below += mass[i];
  const double frac = std::clamp((x - left_edge) / w, 0.0, 1.0);
  return {std::clamp((below + mass[k] * frac) / total, 0.0, 1.0),
          mass[k] / (w * total)};
}

bool close_to_one(double s) { return std::abs(s - 1.0) <= 1e-9; }

void check_range(const Interval& r, const char* name, std::vector<std::string>& out) {
  if (!r.finite()) out.push_back(std::string(name) + " range has a non-finite bound");
  else if (r.lo > r.hi) out.push_back(std::string(name) + " range is inverted");
}

bool violates_increase(double before, double after) {
  const double scale = std::max({1.0, std::abs(before), std::abs(after)});
  return after < before - kRegularityTolerance * scale;
}

RegularityReport univariate_regularity(const UnivariateSpec& spec, int res,
                                       double (*h)(const UnivariateSpec&, double)) {
  RegularityReport report;
  std::optional<LatticePoint> prev;
  for (int a = 0; a < std::max(res, 2); ++a) {
    const double x = spec.support.lattice(a, std::max(res, 2));
    LatticePoint p{x, 0.0, 0.0};
    try {
      p.value = h(spec, x);
    } catch (const Error&) {
      p.value = HUGE_VAL;
      report.regular = false;
      report.violation = RegularityViolation{RegularityViolation::Axis::singular, p, p};
      return report;
    }
    if (prev && violates_increase(prev->value, p.value)) {
      report.regular = false;
      report.violation = RegularityViolation{RegularityViolation::Axis::cost, *prev, p};
      return report;
    }
    prev = p;
  }
  return report;
}

}  // namespace

std::vector<std::string> distribution_problems(const DistributionSpec& spec) {
  std::vector<std::string> out;
  check_range(spec.cost, "cost", out);
  check_range(spec.capacity, "capacity", out);
  if (!out.empty()) return out;
  std::visit(
      Overloaded{
          [&](const IndependentUniform&) {
            if (spec.cost.width() <= 0.0)
              out.push_back("uniform cost range must have positive width");
          },
          [&](const CapacityLinkedUniform& f) {
            if (!(f.slope >= 0.0) || !std::isfinite(f.slope))
              out.push_back("capacity-linked slope must be finite and >= 0");
            else if (spec.cost.hi - f.slope * spec.capacity.width() <= spec.cost.lo)
              out.push_back("capacity-linked cost support collapses at the top capacity");
          },
          [&](const TabulatedGrid& g) {
            if (g.mass.empty() || g.mass.front().empty()) {
              out.push_back("tabulated grid is empty");
              return;
            }
            if (spec.cost.width() <= 0.0)
              out.push_back("tabulated cost range must have positive width");
            double total = 0.0;
            for (const auto& row : g.mass) {
              if (row.size() != g.mass.front().size()) {
                out.push_back("tabulated grid rows differ in length");
                return;
              }
              for (double m : row) {
                if (!(m >= 0.0) || !std::isfinite(m)) {
                  out.push_back("tabulated grid has a negative or non-finite mass");
                  return;
                }
                total += m;
              }
            }
            if (!close_to_one(total)) out.push_back("tabulated grid mass does not sum to 1");
          },
      },
      spec.family);
  return out;
}

Interval conditional_cost_support(const DistributionSpec& spec, double q) {
  require_capacity(spec, q);
  if (const auto* f = std::get_if<CapacityLinkedUniform>(&spec.family)) {
    const double qc = std::clamp(q, spec.capacity.lo, spec.capacity.hi);
    return {spec.cost.lo, spec.cost.hi - f->slope * (qc - spec.capacity.lo)};
  }
  return spec.cost;
}

double conditional_cdf(const DistributionSpec& spec, double c, double q) {
  const Interval support = conditional_cost_support(spec, q);
  c = require_cost(support, c, q);
  return std::visit(
      Overloaded{
          [&](const TabulatedGrid& g) {
            return histogram_eval(spec.cost, grid_row(spec, g, q), c).cdf;
          },
          [&](const auto&) {
            return support.width() > 0.0 ? (c - support.lo) / support.width() : 1.0;
          },
      },
      spec.family);
}

double conditional_density(const DistributionSpec& spec, double c, double q) {
  const Interval support = conditional_cost_support(spec, q);
  c = require_cost(support, c, q);
  return std::visit(
      Overloaded{
          [&](const TabulatedGrid& g) {
            return histogram_eval(spec.cost, grid_row(spec, g, q), c).density;
          },
          [&](const auto&) {
            return support.width() > 0.0 ? 1.0 / support.width() : 0.0;
          },
      },
      spec.family);
}

double virtual_cost(const DistributionSpec& spec, double c, double q) {
  // The uniform families have the closed form 2c - lo; skip the division.
  if (std::holds_alternative<IndependentUniform>(spec.family) ||
      std::holds_alternative<CapacityLinkedUniform>(spec.family)) {
    const Interval support = conditional_cost_support(spec, q);
    const double cc = require_cost(support, c, q);
    if (support.width() <= 0.0)
      throw SingularityError("zero conditional density at " + point_text(c, q));
    return 2.0 * cc - support.lo;
  }
  const double f = conditional_density(spec, c, q);
  if (f <= 0.0) throw SingularityError("zero conditional density at " + point_text(c, q));
  return c + conditional_cdf(spec, c, q) / f;
}

std::string RegularityViolation::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (axis) {
    case Axis::singular:
      out << "virtual cost undefined (zero density) at "
          << point_text(first.cost, first.capacity);
      return out.str();
    case Axis::cost:
      out << "virtual cost decreases in cost: H" << point_text(first.cost, first.capacity)
          << "=" << first.value << " > H" << point_text(second.cost, second.capacity)
          << "=" << second.value;
      return out.str();
    case Axis::capacity:
      out << "virtual cost increases in capacity: H"
          << point_text(first.cost, first.capacity) << "=" << first.value << " < H"
          << point_text(second.cost, second.capacity) << "=" << second.value;
      return out.str();
  }
  return {};
}

RegularityReport is_regular(const DistributionSpec& spec, int grid_resolution) {
  const int n = std::max(grid_resolution, 2);
  RegularityReport report;

  // values[b][a]: capacity lattice b, cost lattice a; nullopt outside support.
  std::vector<std::vector<std::optional<LatticePoint>>> values(
      n, std::vector<std::optional<LatticePoint>>(n));
  for (int b = 0; b < n; ++b) {
    const double q = spec.capacity.lattice(b, n);
    const Interval support = conditional_cost_support(spec, q);
    for (int a = 0; a < n; ++a) {
      const double c = spec.cost.lattice(a, n);
      if (!support.contains(c, domain_slack(support))) continue;
      LatticePoint p{c, q, 0.0};
      try {
        p.value = virtual_cost(spec, c, q);
      } catch (const Error&) {
        report.regular = false;
        report.violation = RegularityViolation{RegularityViolation::Axis::singular, p, p};
        return report;
      }
      values[b][a] = p;
    }
  }

  for (int b = 0; b < n; ++b) {
    const LatticePoint* prev = nullptr;
    for (int a = 0; a < n; ++a) {
      if (!values[b][a]) continue;
      if (prev && violates_increase(prev->value, values[b][a]->value)) {
        report.regular = false;
        report.violation =
            RegularityViolation{RegularityViolation::Axis::cost, *prev, *values[b][a]};
        return report;
      }
      prev = &*values[b][a];
    }
  }
  for (int a = 0; a < n; ++a) {
    const LatticePoint* prev = nullptr;
    for (int b = 0; b < n; ++b) {
      if (!values[b][a]) continue;
      // Non-increasing in capacity: a rise is a violation.
      if (prev && violates_increase(values[b][a]->value, prev->value)) {
        report.regular = false;
        report.violation =
            RegularityViolation{RegularityViolation::Axis::capacity, *prev, *values[b][a]};
        return report;
      }
      prev = &*values[b][a];
    }
  }
  return report;
}

Type sample_type(const DistributionSpec& spec, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const IndependentUniform&) {
            const double q = draw(rng, spec.capacity.lo, spec.capacity.hi);
            const double c = draw(rng, spec.cost.lo, spec.cost.hi);
            return Type{c, q};
          },
          [&](const CapacityLinkedUniform&) {
            const double q = draw(rng, spec.capacity.lo, spec.capacity.hi);
            const Interval s = conditional_cost_support(spec, q);
            return Type{draw(rng, s.lo, s.hi), q};
          },
          [&](const TabulatedGrid& g) {
            const std::size_t rows = g.mass.size();
            const std::size_t cols = g.mass.front().size();
            const double u = unit_uniform(rng);
            double acc = 0.0;
            std::size_t row = rows - 1, col = cols - 1;
            bool found = false;
            for (std::size_t r = 0; r < rows && !found; ++r) {
              for (std::size_t k = 0; k < cols; ++k) {
                if (g.mass[r][k] <= 0.0) continue;
                acc += g.mass[r][k];
                row = r;
                col = k;
                if (u < acc) {
                  found = true;
                  break;
                }
              }
            }
            const double cw = spec.cost.width() / static_cast<double>(cols);
            const double qw = spec.capacity.width() / static_cast<double>(rows);
            const double c0 = spec.cost.lo + cw * static_cast<double>(col);
            const double q0 = spec.capacity.lo + qw * static_cast<double>(row);
            return Type{draw(rng, c0, c0 + cw), draw(rng, q0, q0 + qw)};
          },
      },
      spec.family);
}

// ---------------------------------------------------------------------------

std::vector<std::string> distribution_problems(const UnivariateSpec& spec) {
  std::vector<std::string> out;
  check_range(spec.support, "support", out);
  if (!out.empty()) return out;
  if (spec.support.width() <= 0.0) out.push_back("support must have positive width");
  if (const auto* h = std::get_if<HistogramShape>(&spec.shape)) {
    if (h->mass.empty()) {
      out.push_back("histogram is empty");
      return out;
    }
    for (double m : h->mass) {
      if (!(m >= 0.0) || !std::isfinite(m)) {
        out.push_back("histogram has a negative or non-finite mass");
        return out;
      }
    }
    if (!close_to_one(row_total(h->mass))) out.push_back("histogram mass does not sum to 1");
  }
  return out;
}

namespace {

CellEval univariate_eval(const UnivariateSpec& spec, double x) {
  if (!spec.support.contains(x, domain_slack(spec.support))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "value " << x << " outside support [" << spec.support.lo << ", "
        << spec.support.hi << "]";
    throw DomainError(msg.str());
  }
  x = std::clamp(x, spec.support.lo, spec.support.hi);
  if (const auto* h = std::get_if<HistogramShape>(&spec.shape)) {
    return histogram_eval(spec.support, h->mass, x);
  }
  return {(x - spec.support.lo) / spec.support.width(), 1.0 / spec.support.width()};
}

}  // namespace

double cdf(const UnivariateSpec& spec, double x) { return univariate_eval(spec, x).cdf; }

double density(const UnivariateSpec& spec, double x) {
  return univariate_eval(spec, x).density;
}

double virtual_cost(const UnivariateSpec& spec, double c) {
  if (std::holds_alternative<UniformShape>(spec.shape)) {
    univariate_eval(spec, c);
    return 2.0 * std::clamp(c, spec.support.lo, spec.support.hi) - spec.support.lo;
  }
  const CellEval e = univariate_eval(spec, c);
  if (e.density <= 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "zero density at c=" << c;
    throw SingularityError(msg.str());
  }
  return c + e.cdf / e.density;
}

double virtual_value(const UnivariateSpec& spec, double v) {
  if (std::holds_alternative<UniformShape>(spec.shape)) {
    univariate_eval(spec, v);
    return 2.0 * std::clamp(v, spec.support.lo, spec.support.hi) - spec.support.hi;
  }
  const CellEval e = univariate_eval(spec, v);
  if (e.density <= 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "zero density at v=" << v;
    throw SingularityError(msg.str());
  }
  return v - (1.0 - e.cdf) / e.density;
}

RegularityReport is_regular_cost(const UnivariateSpec& spec, int grid_resolution) {
  return univariate_regularity(spec, grid_resolution,
                               static_cast<double (*)(const UnivariateSpec&, double)>(
                                   &virtual_cost));
}

RegularityReport is_regular_value(const UnivariateSpec& spec, int grid_resolution) {
  return univariate_regularity(spec, grid_resolution, &virtual_value);
}

double sample(const UnivariateSpec& spec, Rng& rng) {
  if (const auto* h = std::get_if<HistogramShape>(&spec.shape)) {
    const double u = unit_uniform(rng);
    double acc = 0.0;
    std::size_t cell = h->mass.size() - 1;
    for (std::size_t k = 0; k < h->mass.size(); ++k) {
      acc += h->mass[k];
      if (h->mass[k] > 0.0 && u < acc) {
        cell = k;
        break;
      }
    }
    const double w = spec.support.width() / static_cast<double>(h->mass.size());
    const double lo = spec.support.lo + w * static_cast<double>(cell);
    return draw(rng, lo, lo + w);
  }
  return draw(rng, spec.support.lo, spec.support.hi);
}

}  // namespace optauction::dist
