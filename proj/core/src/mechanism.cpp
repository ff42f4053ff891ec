#include "optauction/mechanism.hpp"

#include "optauction/error.hpp"

namespace optauction {

SellerResult Mechanism::run_for(const Scenario& scenario, std::span<const SellerBid> bids,
                                std::size_t seller) const {
  const Outcome out = run(scenario, bids);
  return {out.allocation.quantities[seller], out.payments[seller]};
}

std::vector<SellerResult> Mechanism::run_for_costs(const Scenario& scenario,
                                                   std::span<const SellerBid> bids,
                                                   std::size_t seller,
                                                   std::span<const double> costs) const {
  std::vector<SellerBid> local(bids.begin(), bids.end());
  std::vector<SellerResult> out;
  out.reserve(costs.size());
  for (double c : costs) {
    local[seller].cost = c;
    out.push_back(run_for(scenario, local, seller));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> OptimalAuction::allocate(const Scenario& scenario,
                                             std::span<const SellerBid> bids) const {
  return auction::optimal_allocation(scenario, bids).x;
}

Outcome OptimalAuction::run(const Scenario& scenario, std::span<const SellerBid> bids) const {
  return auction::run_optimal_auction(scenario, bids, options_);
}

SellerResult OptimalAuction::run_for(const Scenario& scenario, std::span<const SellerBid> bids,
                                     std::size_t seller) const {
  const double cost = bids[seller].cost;
  return run_for_costs(scenario, bids, seller, std::span<const double>(&cost, 1)).front();
}

std::vector<SellerResult> OptimalAuction::run_for_costs(const Scenario& scenario,
                                                        std::span<const SellerBid> bids,
                                                        std::size_t seller,
                                                        std::span<const double> costs) const {
  validate_bids(scenario, bids);
  if (options_.check_regularity) auction::require_regular(scenario, options_.regularity_grid);
  const StepFunction curve =
      auction::allocation_curve(scenario, bids, seller, bids[seller].capacity, options_);
  std::vector<SellerBid> local(bids.begin(), bids.end());
  std::vector<SellerResult> out;
  out.reserve(costs.size());
  for (double c : costs) {
    local[seller].cost = c;
    const double x = auction::optimal_allocation(scenario, local).x[seller];
    out.push_back({x, auction::payment_single_minded(seller, x, c, curve)});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double single_item_demand(const Scenario& scenario) {
  if (scenario.items.size() != 1) {
    throw InvalidInputError("kth-price auction needs a single-item scenario");
  }
  return scenario.items.front().demand;
}

}  // namespace

std::vector<double> KthPriceAuction::allocate(const Scenario& scenario,
                                              std::span<const SellerBid> bids) const {
  return run(scenario, bids).allocation.quantities;
}

Outcome KthPriceAuction::run(const Scenario& scenario, std::span<const SellerBid> bids) const {
  validate_bids(scenario, bids);
  return auction::kth_price_auction(bids, single_item_demand(scenario));
}

// ---------------------------------------------------------------------------

std::vector<double> PostedPriceMechanism::allocate(const Scenario& scenario,
                                                   std::span<const SellerBid> bids) const {
  std::vector<double> prices;
  prices.reserve(scenario.sellers.size());
  for (const auto& s : scenario.sellers) prices.push_back(s.cost_range().hi);
  const lp::LpSolution sol =
      lp::solve(auction::winner_determination_lp(scenario, bids, std::move(prices)));
  if (sol.status != lp::LpStatus::optimal) {
    throw InfeasibleError("reported capacities cannot cover demand");
  }
  return sol.x;
}

Outcome PostedPriceMechanism::run(const Scenario& scenario,
                                  std::span<const SellerBid> bids) const {
  validate_bids(scenario, bids);
  Outcome out;
  out.allocation.quantities = allocate(scenario, bids);
  out.payments.resize(bids.size());
  for (std::size_t i = 0; i < bids.size(); ++i) {
    out.payments[i] = scenario.sellers[i].cost_range().hi * out.allocation.quantities[i];
  }
  out.objective = out.total_payment();
  return out;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Mechanism> make_mechanism(std::string_view name) {
  if (name == "optimal") return std::make_unique<OptimalAuction>();
  if (name == "kth-price") return std::make_unique<KthPriceAuction>();
  if (name == "posted-price") return std::make_unique<PostedPriceMechanism>();
  throw InvalidInputError("unknown mechanism '" + std::string(name) + "'");
}

std::vector<std::string> mechanism_names() { return {"optimal", "kth-price", "posted-price"}; }

}  // namespace optauction
