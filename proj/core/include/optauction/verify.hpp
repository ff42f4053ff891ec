#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optauction/dist.hpp"
#include "optauction/mechanism.hpp"
#include "optauction/model.hpp"

// Empirical incentive checks for single-minded procurement mechanisms. Every
// check runs a mechanism as a black box on a cost x capacity bid lattice
// against a set of opponent profiles. In dominant mode each profile must pass
// on its own; in Bayesian mode quantities are averaged over the profiles and
// compared with a standard-error allowance.
namespace optauction::verify {

inline constexpr double kDeterministicTolerance = 1e-6;
inline constexpr double kStandardErrors = 3.0;

enum class Mode { dominant, bayesian };

struct GridOptions {
  int cost_points = 21;
  int capacity_points = 11;
};

// Independent truthful bid profiles, one bid per seller, drawn in seller order
// from a generator seeded with `seed`.
std::vector<std::vector<SellerBid>> sample_truthful_profiles(const Scenario& scenario,
                                                             std::size_t count,
                                                             std::uint64_t seed);

struct UtilityEvaluation {
  int seller_id = 0;
  dist::Type true_type;
  SellerBid bid;
  double quantity = 0.0;
  double payment = 0.0;
  double utility = 0.0;  // payment - true cost * quantity
};

UtilityEvaluation evaluate_utility(const Mechanism& mechanism, const Scenario& scenario,
                                   std::span<const SellerBid> profile, std::size_t seller,
                                   dist::Type true_type, SellerBid bid);

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Sample mean and standard error of the mean, summed in index order.
Estimate estimate(std::span<const double> values);

struct ExpectedStats {
  int seller_id = 0;
  std::size_t samples = 0;
  Estimate quantity;
  Estimate payment;
  Estimate utility;
  Estimate surplus;  // payment - reported cost * quantity
};

// Interim quantities of one seller bidding `bid` with type `true_type`
// against each of `profiles`.
ExpectedStats expected_stats(const Mechanism& mechanism, const Scenario& scenario,
                             std::size_t seller, dist::Type true_type, SellerBid bid,
                             std::span<const std::vector<SellerBid>> profiles);

struct BestResponse {
  double gap = 0.0;  // best grid utility minus truthful utility
  SellerBid best_bid;
  double truthful_utility = 0.0;
  double best_utility = 0.0;
  std::size_t grid_bids = 0;
  std::size_t skipped_bids = 0;  // lattice points outside the conditional support
};

// Grid over [c_lo, c_hi] x [q_lo, true capacity]; capacity is never
// over-reported. Dominant mode returns the worst per-profile gap.
BestResponse best_response_gap(const Mechanism& mechanism, const Scenario& scenario,
                               std::size_t seller, dist::Type true_type,
                               std::span<const std::vector<SellerBid>> profiles, Mode mode,
                               const GridOptions& grid = {});

struct ConditionResult {
  bool passed = true;
  std::size_t checked = 0;
  double worst = 0.0;  // largest excess over the allowance, 0 when passing
  std::string detail;  // first failure
};

// Condition 1: surplus equals surplus at the top cost plus the integral of
// quantity from the report to the top. Condition 2: surplus is non-negative
// and non-decreasing in reported capacity. Condition 3: quantity is
// non-increasing in reported cost.
struct IncentiveReport {
  int seller_id = 0;
  ConditionResult condition1;
  ConditionResult condition2;
  ConditionResult condition3;
  std::size_t skipped_bids = 0;
  bool passed() const { return condition1.passed && condition2.passed && condition3.passed; }
};

IncentiveReport check_incentive_conditions(const Mechanism& mechanism, const Scenario& scenario,
                              std::size_t seller,
                              std::span<const std::vector<SellerBid>> profiles, Mode mode,
                              const GridOptions& grid = {});

struct CostEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

// Mean total payment under truthful bidding over `samples` sampled profiles.
CostEstimate expected_cost(const Mechanism& mechanism, const Scenario& scenario,
                           std::size_t samples, std::uint64_t seed);

}  // namespace optauction::verify
