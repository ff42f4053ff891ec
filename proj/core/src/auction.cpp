#include "optauction/auction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction::auction {

std::vector<double> virtual_costs(const Scenario& scenario, std::span<const SellerBid> bids) {
  std::vector<double> h(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    h[i] = dist::virtual_cost(scenario.sellers[i].distribution, bids[i].cost, bids[i].capacity);
  }
  return h;
}

lp::CoveringLp winner_determination_lp(const Scenario& scenario,
                                       std::span<const SellerBid> bids,
                                       std::vector<double> objective) {
  lp::CoveringLp problem;
  problem.cost = std::move(objective);
  problem.upper.reserve(bids.size());
  for (const auto& b : bids) problem.upper.push_back(b.capacity);
  problem.coverage = coverage_matrix(scenario);
  problem.demand = scenario.demands();
  return problem;
}

void require_regular(const Scenario& scenario, int grid_resolution) {
  for (const auto& s : scenario.sellers) {
    const auto report = dist::is_regular(s.distribution, grid_resolution);
    if (!report.regular) {
      throw NotRegularError("seller " + std::to_string(s.id) +
                            " is not regular: " + report.violation->describe());
    }
  }
}

Interval curve_domain(const SellerSpec& seller, double capacity) {
  return dist::conditional_cost_support(seller.distribution, capacity);
}

StepFunction allocation_curve(const Scenario& scenario, std::span<const SellerBid> bids,
                              std::size_t seller, double capacity,
                              const AuctionOptions& options) {
  if (seller >= scenario.sellers.size() || bids.size() != scenario.sellers.size()) {
    throw InvalidInputError("allocation_curve: seller index or bid count out of range");
  }
  const auto& spec = scenario.sellers[seller].distribution;
  std::vector<SellerBid> adjusted(bids.begin(), bids.end());
  adjusted[seller].capacity = capacity;
  adjusted[seller].cost = spec.cost.lo;
  const lp::CoveringLp problem =
      winner_determination_lp(scenario, adjusted, virtual_costs(scenario, adjusted));

  const auto quantity_at = [&](double t) {
    const double h = dist::virtual_cost(spec, t, capacity);
    const lp::LpSolution sol = lp::solve_with_modified_cost(problem, seller, h);
    if (sol.status != lp::LpStatus::optimal) {
      throw InfeasibleError("reported capacities cannot cover demand");
    }
    return sol.x[seller];
  };

  const Interval domain = curve_domain(scenario.sellers[seller], capacity);
  TraceOptions trace;
  trace.scan_steps = options.scan_steps;
  trace.resolution = options.resolution;
  trace.require_non_increasing = true;
  return trace_step_function(quantity_at, domain.lo, domain.hi, trace);
}

double payment_single_minded(std::size_t seller, double quantity, double reported_cost,
                             const StepFunction& curve) {
  if (reported_cost < curve.lo() || reported_cost > curve.hi()) {
    throw ConsistencyError("seller " + std::to_string(seller + 1) +
                           ": reported cost outside the allocation curve domain");
  }
  constexpr double kLevelTolerance = 1e-7;
  if (!same_level(curve(reported_cost), quantity, kLevelTolerance)) {
    // A report sitting on a breakpoint (within bisection width) may take any
    // value between the two adjacent levels.
    bool near_break = false;
    const auto breaks = curve.breakpoints();
    const auto levels = curve.levels();
    for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
      if (std::abs(breaks[k] - reported_cost) <= 1e-8 * std::max(1.0, std::abs(reported_cost))) {
        const double lo = std::min(levels[k - 1], levels[k]);
        const double hi = std::max(levels[k - 1], levels[k]);
        near_break = quantity >= lo - kLevelTolerance && quantity <= hi + kLevelTolerance;
      }
    }
    if (!near_break) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "seller " << seller + 1 << ": allocation " << quantity
          << " does not match the allocation curve value " << curve(reported_cost)
          << " at cost " << reported_cost;
      throw ConsistencyError(msg.str());
    }
  }
  return reported_cost * quantity + curve.integral(reported_cost, curve.hi());
}

lp::LpSolution optimal_allocation(const Scenario& scenario, std::span<const SellerBid> bids) {
  const lp::CoveringLp problem =
      winner_determination_lp(scenario, bids, virtual_costs(scenario, bids));
  lp::LpSolution sol = lp::solve(problem);
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("reported capacities cannot cover demand");
  }
  return sol;
}

Outcome run_optimal_auction(const Scenario& scenario, std::span<const SellerBid> bids,
                            const AuctionOptions& options) {
  validate_bids(scenario, bids);
  if (options.check_regularity) require_regular(scenario, options.regularity_grid);

  Outcome out;
  out.virtual_costs = virtual_costs(scenario, bids);
  const lp::LpSolution sol =
      lp::solve(winner_determination_lp(scenario, bids, out.virtual_costs));
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("reported capacities cannot cover demand");
  }
  out.allocation.quantities = sol.x;
  out.objective = sol.objective;

  out.payments.resize(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const StepFunction curve =
        allocation_curve(scenario, bids, i, bids[i].capacity, options);
    out.payments[i] = payment_single_minded(i, sol.x[i], bids[i].cost, curve);
  }
  return out;
}

Outcome kth_price_auction(std::span<const SellerBid> bids, double demand) {
  const double supply = std::accumulate(bids.begin(), bids.end(), 0.0,
                                        [](double acc, const SellerBid& b) { return acc + b.capacity; });
  if (supply < demand) throw InfeasibleError("k-th price: total capacity below demand");

  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return bids[a].cost < bids[b].cost;
  });

  Outcome out;
  out.allocation.quantities.assign(bids.size(), 0.0);
  double remaining = demand;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, bids[i].capacity);
    out.allocation.quantities[i] = take;
    remaining -= take;
  }

  const auto first_loser = std::find_if(order.begin(), order.end(), [&](std::size_t i) {
    return out.allocation.quantities[i] == 0.0;
  });
  out.payments.assign(bids.size(), 0.0);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const double price = first_loser != order.end() ? bids[*first_loser].cost : bids[i].cost;
    out.payments[i] = price * out.allocation.quantities[i];
  }
  out.objective = out.total_payment();
  return out;
}

MyersonResult myerson_single_item(const MyersonSingleItemInstance& instance,
                                  int regularity_grid) {
  const std::size_t n = instance.valuations.size();
  if (instance.distributions.size() != n) {
    throw InvalidInputError("myerson: one distribution per bidder required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto report = dist::is_regular_value(instance.distributions[i], regularity_grid);
    if (!report.regular) {
      throw NotRegularError("bidder " + std::to_string(i + 1) +
                            " is not regular: " + report.violation->describe());
    }
  }

  MyersonResult result;
  result.virtual_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.virtual_values[i] =
        dist::virtual_value(instance.distributions[i], instance.valuations[i]);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (result.virtual_values[i] > result.virtual_values[best]) best = i;
  }
  if (n == 0 || !(result.virtual_values[best] > 0.0)) return result;
  result.winner = best;

  double rival = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != best) rival = std::max(rival, result.virtual_values[j]);
  }
  const auto& spec = instance.distributions[best];
  const auto wins = [&](double theta) { return dist::virtual_value(spec, theta) > rival; };
  double lo = spec.support.lo;
  double hi = instance.valuations[best];
  if (wins(lo)) {
    result.payment = lo;
    return result;
  }
  // wins(lo) is false and wins(hi) is true; shrink to machine precision.
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (wins(mid) ? hi : lo) = mid;
  }
  result.payment = hi;
  return result;
}

}  // namespace optauction::auction
