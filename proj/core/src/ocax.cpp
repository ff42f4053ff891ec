#include "optauction/ocax.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction::ocax {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t full_mask(std::size_t items) {
  return items == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << items) - 1;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const CoverProblem& p)
      : p_(p), n_(p.masks.size()), full_(full_mask(p.num_items)) {
    suffix_union_.assign(n_ + 1, 0);
    suffix_negative_.assign(n_ + 1, 0.0);
    for (std::size_t i = n_; i-- > 0;) {
      suffix_union_[i] = suffix_union_[i + 1] | p_.masks[i][0] | p_.masks[i][1];
      suffix_negative_[i] = suffix_negative_[i + 1] + std::min(0.0, p_.costs[i][0]) +
                            std::min(0.0, p_.costs[i][1]);
    }
    current_.assign(n_, Choice::none);
  }

  std::optional<CoverSolution> run() {
    dfs(0, 0, 0.0);
    if (!found_) return std::nullopt;
    CoverSolution sol;
    sol.selection.choice = best_choice_;
    sol.objective = best_;
    sol.nodes = nodes_;
    return sol;
  }

 private:
  double improvement_slack() const { return 1e-12 * std::max(1.0, std::abs(best_)); }

  // Largest, over uncovered items, of the cheapest non-negative remaining
  // coefficient able to cover it.
  double uncovered_bound(std::size_t from, std::uint64_t covered) const {
    double bound = 0.0;
    for (std::size_t k = 0; k < p_.num_items; ++k) {
      const std::uint64_t bit = std::uint64_t{1} << k;
      if (covered & bit) continue;
      double cheapest = kInf;
      for (std::size_t i = from; i < n_; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (p_.masks[i][j] & bit) cheapest = std::min(cheapest, std::max(0.0, p_.costs[i][j]));
        }
      }
      bound = std::max(bound, cheapest);
    }
    return bound;
  }

  void dfs(std::size_t i, std::uint64_t covered, double cost) {
    ++nodes_;
    if ((covered | suffix_union_[i]) != full_) return;
    if (i == n_) {
      if (!found_ || cost < best_ - improvement_slack()) {
        found_ = true;
        best_ = cost;
        best_choice_ = current_;
      }
      return;
    }
    if (found_) {
      const double bound = cost + suffix_negative_[i] + uncovered_bound(i, covered);
      if (bound >= best_ - improvement_slack()) return;
    }
    for (Choice c : {Choice::first, Choice::second}) {
      const int j = c == Choice::first ? 0 : 1;
      current_[i] = c;
      dfs(i + 1, covered | p_.masks[i][j], cost + p_.costs[i][j]);
    }
    current_[i] = Choice::none;
    dfs(i + 1, covered, cost);
  }

  const CoverProblem& p_;
  std::size_t n_;
  std::uint64_t full_;
  std::vector<std::uint64_t> suffix_union_;
  std::vector<double> suffix_negative_;
  std::vector<Choice> current_;
  std::vector<Choice> best_choice_;
  double best_ = kInf;
  bool found_ = false;
  long nodes_ = 0;
};

// Winner determination for one bidder whose two costs vary while everybody
// else's virtual costs stay fixed.
class BidderView {
 public:
  BidderView(const XorScenario& scenario, std::size_t bidder)
      : scenario_(scenario), bidder_(bidder) {
    if (bidder >= scenario.bidders.size()) throw InvalidInputError("ocax: bidder index out of range");
    std::vector<std::array<double, 2>> h(scenario.bidders.size());
    for (std::size_t i = 0; i < scenario.bidders.size(); ++i) {
      const auto& b = scenario.bidders[i];
      for (int j = 0; j < 2; ++j) h[i][j] = dist::virtual_cost(b.distributions[j], b.bids[j]);
    }
    problem_ = cover_problem(scenario, h);
  }

  const XorBidder& bidder() const { return scenario_.bidders[bidder_]; }

  std::array<int, 2> indicators(double c1, double c2) const {
    CoverProblem p = problem_;
    p.costs[bidder_][0] = dist::virtual_cost(bidder().distributions[0], c1);
    p.costs[bidder_][1] = dist::virtual_cost(bidder().distributions[1], c2);
    const auto sol = solve_cover(p);
    if (!sol) throw InfeasibleError("ocax: items cannot be covered");
    const Choice c = sol->selection.choice[bidder_];
    return {c == Choice::first ? 1 : 0, c == Choice::second ? 1 : 0};
  }

  // A cover exists with this bidder taking nothing (XOR still applies to
  // everybody else).
  bool others_cover_alone() const {
    CoverProblem p = problem_;
    p.masks[bidder_] = {0, 0};
    return solve_cover(p).has_value();
  }

 private:
  const XorScenario& scenario_;
  std::size_t bidder_;
  CoverProblem problem_;
};

void require_valid(const XorScenario& scenario) {
  const auto problems = validate(scenario);
  if (!problems.empty()) throw InvalidInputError("ocax: " + problems.front());
}

void require_regular(const XorScenario& scenario, int grid) {
  for (const auto& b : scenario.bidders) {
    for (int j = 0; j < 2; ++j) {
      const auto report = dist::is_regular_cost(b.distributions[j], grid);
      if (!report.regular) {
        throw NotRegularError("bidder " + std::to_string(b.id) + " bundle " +
                              std::to_string(j + 1) +
                              " is not regular: " + report.violation->describe());
      }
    }
  }
}

double leg_integral(const std::function<double(double)>& f, double from, double to,
                    const OcaxOptions& options) {
  if (!(from < to)) return 0.0;
  TraceOptions trace;
  trace.scan_steps = options.scan_steps;
  trace.resolution = options.resolution;
  trace.require_non_increasing = true;
  return trace_step_function(f, from, to, trace).integral(from, to);
}

}  // namespace

std::vector<std::string> validate(const XorScenario& scenario) {
  std::vector<std::string> out;
  if (scenario.items.size() > 64) out.push_back("at most 64 items are supported");
  std::set<std::string> items(scenario.items.begin(), scenario.items.end());
  if (items.size() != scenario.items.size()) out.push_back("duplicate item id");
  std::set<std::string> covered;
  for (std::size_t i = 0; i < scenario.bidders.size(); ++i) {
    const auto& b = scenario.bidders[i];
    const std::string who = "bidder " + std::to_string(b.id);
    if (b.id != static_cast<int>(i) + 1) out.push_back(who + " is not numbered densely from 1");
    if (!b.cost_range.finite() || b.cost_range.lo >= b.cost_range.hi)
      out.push_back(who + " has an invalid cost range");
    std::set<std::string> first;
    for (int j = 0; j < 2; ++j) {
      if (b.bundles[j].empty()) out.push_back(who + " bundle " + std::to_string(j + 1) + " is empty");
      for (const auto& id : b.bundles[j]) {
        if (!items.count(id)) out.push_back(who + " bundles unknown item '" + id + "'");
        if (j == 0) first.insert(id);
        else if (first.count(id)) out.push_back(who + " bundles overlap on item '" + id + "'");
        covered.insert(id);
      }
      if (b.distributions[j].support != b.cost_range)
        out.push_back(who + " bundle " + std::to_string(j + 1) +
                      " distribution support differs from the cost range");
      for (const auto& p : dist::distribution_problems(b.distributions[j]))
        out.push_back(who + " bundle " + std::to_string(j + 1) + ": " + p);
      if (!std::isfinite(b.bids[j]) || !b.cost_range.contains(b.bids[j], 1e-12))
        out.push_back(who + " bid for bundle " + std::to_string(j + 1) + " is outside the cost range");
    }
  }
  for (const auto& id : scenario.items) {
    if (!covered.count(id)) out.push_back("item '" + id + "' is in no bundle");
  }
  return out;
}

CoverProblem cover_problem(const XorScenario& scenario,
                           const std::vector<std::array<double, 2>>& costs) {
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < scenario.items.size(); ++k) index[scenario.items[k]] = k;
  CoverProblem p;
  p.num_items = scenario.items.size();
  p.costs = costs;
  p.masks.resize(scenario.bidders.size());
  for (std::size_t i = 0; i < scenario.bidders.size(); ++i) {
    for (int j = 0; j < 2; ++j) {
      std::uint64_t m = 0;
      for (const auto& id : scenario.bidders[i].bundles[j]) {
        auto it = index.find(id);
        if (it != index.end()) m |= std::uint64_t{1} << it->second;
      }
      p.masks[i][j] = m;
    }
  }
  return p;
}

std::optional<CoverSolution> solve_cover(const CoverProblem& problem) {
  if (problem.num_items > 64) throw InvalidInputError("ocax: at most 64 items are supported");
  if (problem.costs.size() != problem.masks.size())
    throw InvalidInputError("ocax: one cost pair per bidder required");
  return BranchAndBound(problem).run();
}

OcaxResult solve_ocax(const XorScenario& scenario, const OcaxOptions& options) {
  require_valid(scenario);
  if (options.check_regularity) require_regular(scenario, options.regularity_grid);
  OcaxResult result;
  result.virtual_costs.resize(scenario.bidders.size());
  for (std::size_t i = 0; i < scenario.bidders.size(); ++i) {
    const auto& b = scenario.bidders[i];
    for (int j = 0; j < 2; ++j)
      result.virtual_costs[i][j] = dist::virtual_cost(b.distributions[j], b.bids[j]);
  }
  const auto sol = solve_cover(cover_problem(scenario, result.virtual_costs));
  if (!sol) throw InfeasibleError("ocax: items cannot be covered");
  result.selection = sol->selection;
  result.objective = sol->objective;
  return result;
}

std::array<int, 2> win_indicators(const XorScenario& scenario, std::size_t bidder,
                                  std::array<double, 2> costs) {
  return BidderView(scenario, bidder).indicators(costs[0], costs[1]);
}

OcaxPayment ocax_payment(const XorScenario& scenario, std::size_t bidder,
                         const OcaxOptions& options) {
  require_valid(scenario);
  if (options.check_regularity) require_regular(scenario, options.regularity_grid);
  const BidderView view(scenario, bidder);
  const auto& b = view.bidder();
  const double c1 = b.bids[0];
  const double c2 = b.bids[1];
  const double lo = b.cost_range.lo;
  const double top = b.cost_range.hi;

  OcaxPayment out;
  const auto won = view.indicators(c1, c2);
  out.won = won[0] ? Choice::first : (won[1] ? Choice::second : Choice::none);

  const auto x1_at = [&](double fixed_c2) {
    return [&view, fixed_c2](double t) { return static_cast<double>(view.indicators(t, fixed_c2)[0]); };
  };
  const auto x2_at = [&](double fixed_c1) {
    return [&view, fixed_c1](double t) { return static_cast<double>(view.indicators(fixed_c1, t)[1]); };
  };

  out.utility_integral =
      leg_integral(x1_at(c2), c1, top, options) + leg_integral(x2_at(top), c2, top, options);
  out.utility_integral_alt =
      leg_integral(x2_at(c1), c2, top, options) + leg_integral(x1_at(top), c1, top, options);
  if (std::abs(out.utility_integral - out.utility_integral_alt) > kPathTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bidder " << b.id << ": payment integral depends on the path ("
        << out.utility_integral << " vs " << out.utility_integral_alt
        << "); the winning indicators are not a gradient field";
    throw IntegrabilityError(msg.str());
  }
  out.payment = c1 * won[0] + c2 * won[1] + out.utility_integral;

  for (int j = 0; j < 2; ++j) {
    const auto wins_at = [&](double t) {
      return j == 0 ? view.indicators(t, top)[0] == 1 : view.indicators(top, t)[1] == 1;
    };
    if (!wins_at(lo)) continue;
    if (wins_at(top)) {
      out.critical_cost[j] = top;
      continue;
    }
    double a = lo, z = top;
    while (z - a > options.resolution) {
      const double mid = a + 0.5 * (z - a);
      if (mid <= a || mid >= z) break;
      (wins_at(mid) ? a : z) = mid;
    }
    out.critical_cost[j] = a + 0.5 * (z - a);
  }
  return out;
}

std::string RegionViolation::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::region1_not_downward_closed:
      out << "region 1 not downward closed: lattice (" << first_row << "," << first_col
          << ") outside, (" << second_row << "," << second_col << ") inside";
      break;
    case Kind::region2_not_downward_closed:
      out << "region 2 not downward closed: lattice (" << first_row << "," << first_col
          << ") outside, (" << second_row << "," << second_col << ") inside";
      break;
    case Kind::top_corner_wins:
      out << "bidder wins at the top corner (" << first_row << "," << first_col
          << ") although competitors can cover alone";
      break;
  }
  return out.str();
}

RegionGrid region_partition(const XorScenario& scenario, std::size_t bidder, int resolution,
                            const OcaxOptions& options) {
  require_valid(scenario);
  if (options.check_regularity) require_regular(scenario, options.regularity_grid);
  if (resolution < 2) throw InvalidInputError("ocax: region grid needs resolution >= 2");
  const BidderView view(scenario, bidder);
  const Interval range = view.bidder().cost_range;

  RegionGrid grid;
  grid.resolution = resolution;
  for (int k = 0; k < resolution; ++k) grid.axis.push_back(range.lattice(k, resolution));
  grid.labels.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int r = 0; r < resolution; ++r) {
    for (int c = 0; c < resolution; ++c) {
      const auto x = view.indicators(grid.axis[r], grid.axis[c]);
      grid.labels[static_cast<std::size_t>(r) * resolution + c] =
          x[0] ? 1 : (x[1] ? 2 : 3);
    }
  }
  grid.competitors_cover_alone = view.others_cover_alone();

  using Kind = RegionViolation::Kind;
  for (int c = 0; c < resolution; ++c) {
    int outside = -1;
    for (int r = 0; r < resolution; ++r) {
      if (grid.label(r, c) != 1) {
        if (outside < 0) outside = r;
      } else if (outside >= 0) {
        grid.violations.push_back({Kind::region1_not_downward_closed, outside, c, r, c});
        break;
      }
    }
  }
  for (int r = 0; r < resolution; ++r) {
    int outside = -1;
    for (int c = 0; c < resolution; ++c) {
      if (grid.label(r, c) != 2) {
        if (outside < 0) outside = c;
      } else if (outside >= 0) {
        grid.violations.push_back({Kind::region2_not_downward_closed, r, outside, r, c});
        break;
      }
    }
  }
  const int top = resolution - 1;
  if (grid.competitors_cover_alone && grid.label(top, top) != 3) {
    grid.violations.push_back({Kind::top_corner_wins, top, top, top, top});
  }
  return grid;
}

std::string region_csv(const RegionGrid& grid) {
  std::ostringstream out;
  out.precision(17);
  out << "c1\\c2";
  for (double v : grid.axis) out << ',' << v;
  out << '\n';
  for (int r = 0; r < grid.resolution; ++r) {
    out << grid.axis[r];
    for (int c = 0; c < grid.resolution; ++c) out << ',' << grid.label(r, c);
    out << '\n';
  }
  return out.str();
}

}  // namespace optauction::ocax
