#pragma once

#include <optional>
#include <span>
#include <vector>

#include "optauction/dist.hpp"
#include "optauction/lp.hpp"
#include "optauction/model.hpp"
#include "optauction/step_function.hpp"

namespace optauction::auction {

// Tolerance on the payment identity and the curve/allocation match.
inline constexpr double kPaymentTolerance = 1e-9;

struct AuctionOptions {
  int scan_steps = 256;         // coarse scan of the allocation curve
  double resolution = 1e-9;     // bisection width for each level change
  int regularity_grid = 32;     // lattice used to refuse non-regular sellers
  bool check_regularity = true;
};

// Virtual cost H_i(ĉ_i, q̂_i) of every seller at its reported bid.
std::vector<double> virtual_costs(const Scenario& scenario, std::span<const SellerBid> bids);

// The covering LP with the given objective, reported capacities as upper
// bounds and the scenario's demands.
lp::CoveringLp winner_determination_lp(const Scenario& scenario,
                                       std::span<const SellerBid> bids,
                                       std::vector<double> objective);

// Throws NotRegularError naming the first seller whose virtual cost fails the
// lattice check.
void require_regular(const Scenario& scenario, int grid_resolution);

// Cost interval an allocation curve is traced over: [c̲_i, top] where top is
// the upper end of the conditional cost support at capacity q̂_i (c̄_i except
// for capacity-linked families).
Interval curve_domain(const SellerSpec& seller, double capacity);

// t ↦ x_i(t, q̂_i; b_-i): seller `seller`'s optimal quantity when it reports
// cost t and capacity `capacity` against the other bids (the seller's own
// entry in `bids` is ignored). Throws MonotonicityError if the curve rises.
StepFunction allocation_curve(const Scenario& scenario, std::span<const SellerBid> bids,
                              std::size_t seller, double capacity,
                              const AuctionOptions& options = {});

// ĉ·x* + ∫_ĉ^{top} curve(t) dt. Throws ConsistencyError when the curve does
// not pass through x* at ĉ.
double payment_single_minded(std::size_t seller, double quantity, double reported_cost,
                             const StepFunction& curve);

// Allocation only: solves the virtual-cost LP. Throws InfeasibleError when
// the reported capacities cannot cover demand.
lp::LpSolution optimal_allocation(const Scenario& scenario, std::span<const SellerBid> bids);

// Full mechanism: regularity check, virtual-cost LP, curve-integral payments.
Outcome run_optimal_auction(const Scenario& scenario, std::span<const SellerBid> bids,
                            const AuctionOptions& options = {});

// ---------------------------------------------------------------------------
// Baselines.
// ---------------------------------------------------------------------------

// Uniform-price k-th price procurement auction for one item. Sellers are
// filled in ascending reported cost (ties by seller position); every unit is
// paid the reported cost of the first seller in that order with zero
// allocation. With no such seller each winner is paid its own reported cost.
// Throws InfeasibleError when total capacity is below demand.
Outcome kth_price_auction(std::span<const SellerBid> bids, double demand);

struct MyersonSingleItemInstance {
  std::vector<double> valuations;
  std::vector<dist::UnivariateSpec> distributions;
};

struct MyersonResult {
  std::optional<std::size_t> winner;
  double payment = 0.0;
  std::vector<double> virtual_values;
};

// Myerson's optimal single-item (forward) auction under regularity: the
// highest strictly positive virtual value wins (ties to the lowest index) and
// pays inf{θ : H_i(θ) > 0 and H_i(θ) > H_j(θ_j) for all j ≠ i}, located by
// bisection. Throws NotRegularError for non-regular bidders.
MyersonResult myerson_single_item(const MyersonSingleItemInstance& instance,
                                  int regularity_grid = 64);

}  // namespace optauction::auction
