#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optauction/dist.hpp"
#include "optauction/types.hpp"

namespace optauction {

struct Item {
  std::string id;
  double demand = 0.0;  // units of the item the buyer needs

  friend bool operator==(const Item&, const Item&) = default;
};

// A single-minded, capacitated seller. The seller supplies the same number of
// units of every item in its bundle; cost and capacity ranges live in the
// distribution so that there is one source of truth for the type space.
struct SellerSpec {
  int id = 0;  // dense, 1-based
  std::vector<std::string> bundle;
  dist::DistributionSpec distribution;

  const Interval& cost_range() const { return distribution.cost; }
  const Interval& capacity_range() const { return distribution.capacity; }

  friend bool operator==(const SellerSpec&, const SellerSpec&) = default;
};

struct Scenario {
  std::vector<Item> items;
  std::vector<SellerSpec> sellers;

  std::optional<std::size_t> item_index(std::string_view id) const;
  std::vector<double> demands() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Reported (unit cost, capacity) of one seller.
struct SellerBid {
  int seller_id = 0;
  double cost = 0.0;
  double capacity = 0.0;

  friend bool operator==(const SellerBid&, const SellerBid&) = default;
};

struct Allocation {
  std::vector<double> quantities;  // indexed by seller position
};

struct Outcome {
  Allocation allocation;
  std::vector<double> payments;       // indexed by seller position
  double objective = 0.0;             // total virtual cost (or total payment for baselines)
  std::vector<double> virtual_costs;  // empty for mechanisms that do not use them

  double total_payment() const;
};

enum class IssueKind {
  duplicate_item,
  negative_demand,
  non_dense_seller_id,
  empty_bundle,
  unknown_item,
  duplicate_bundle_item,
  invalid_range,
  invalid_distribution,
  infeasible_demand,
};

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(IssueKind kind) const;
};

// Every structural problem in the scenario; never throws.
ValidationReport validate_scenario(const Scenario& scenario);

// Entry (j, i) is 1 iff item j is in seller i's bundle.
BinaryMatrix coverage_matrix(const Scenario& scenario);

// Throws InvalidInputError unless there is exactly one bid per seller, in
// seller order, each within the seller's cost and capacity ranges.
void validate_bids(const Scenario& scenario, std::span<const SellerBid> bids);

// True when 0 <= x_i <= capacity_i and every item's demand row is met, all
// within `tol`.
bool satisfies_constraints(const Scenario& scenario, std::span<const SellerBid> bids,
                           const Allocation& allocation, double tol = 1e-9);

}  // namespace optauction
