#include "optauction/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "optauction/error.hpp"

namespace optauction {

std::optional<std::size_t> Scenario::item_index(std::string_view id) const {
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (items[j].id == id) return j;
  }
  return std::nullopt;
}

std::vector<double> Scenario::demands() const {
  std::vector<double> d;
  d.reserve(items.size());
  for (const auto& item : items) d.push_back(item.demand);
  return d;
}

double Outcome::total_payment() const {
  return std::accumulate(payments.begin(), payments.end(), 0.0);
}

bool ValidationReport::has(IssueKind kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](const ValidationIssue& i) { return i.kind == kind; });
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  auto add = [&](IssueKind kind, std::string msg) {
    report.issues.push_back({kind, std::move(msg)});
  };

  std::set<std::string> seen;
  for (const auto& item : scenario.items) {
    if (!seen.insert(item.id).second) add(IssueKind::duplicate_item, "duplicate item id '" + item.id + "'");
    if (!(item.demand >= 0.0) || !std::isfinite(item.demand))
      add(IssueKind::negative_demand, "item '" + item.id + "' has a negative or non-finite demand");
  }

  for (std::size_t i = 0; i < scenario.sellers.size(); ++i) {
    const auto& s = scenario.sellers[i];
    const std::string who = "seller " + std::to_string(s.id);
    if (s.id != static_cast<int>(i) + 1)
      add(IssueKind::non_dense_seller_id,
          "seller at position " + std::to_string(i) + " has id " + std::to_string(s.id) +
              ", expected " + std::to_string(i + 1));
    if (s.bundle.empty()) add(IssueKind::empty_bundle, who + " has an empty bundle");
    std::set<std::string> in_bundle;
    for (const auto& id : s.bundle) {
      if (!scenario.item_index(id)) add(IssueKind::unknown_item, who + " bundles unknown item '" + id + "'");
      if (!in_bundle.insert(id).second)
        add(IssueKind::duplicate_bundle_item, who + " lists item '" + id + "' twice");
    }
    const auto& d = s.distribution;
    if (!d.cost.finite() || !d.capacity.finite() || d.cost.lo > d.cost.hi ||
        d.capacity.lo > d.capacity.hi) {
      add(IssueKind::invalid_range, who + " has an inverted or unbounded cost/capacity range");
    } else {
      if (d.capacity.lo < 0.0) add(IssueKind::invalid_range, who + " has a negative capacity bound");
      for (const auto& p : dist::distribution_problems(d))
        add(IssueKind::invalid_distribution, who + ": " + p);
    }
  }

  // Collective feasibility at the top of the capacity ranges.
  for (const auto& item : scenario.items) {
    double supply = 0.0;
    for (const auto& s : scenario.sellers) {
      if (std::find(s.bundle.begin(), s.bundle.end(), item.id) != s.bundle.end())
        supply += s.distribution.capacity.hi;
    }
    if (supply < item.demand) {
      std::ostringstream msg;
      msg << "item '" << item.id << "' demand " << item.demand
          << " exceeds total seller capacity " << supply;
      add(IssueKind::infeasible_demand, msg.str());
    }
  }
  return report;
}

BinaryMatrix coverage_matrix(const Scenario& scenario) {
  BinaryMatrix m(scenario.items.size(), std::vector<std::uint8_t>(scenario.sellers.size(), 0));
  for (std::size_t i = 0; i < scenario.sellers.size(); ++i) {
    for (const auto& id : scenario.sellers[i].bundle) {
      if (auto j = scenario.item_index(id)) m[*j][i] = 1;
    }
  }
  return m;
}

void validate_bids(const Scenario& scenario, std::span<const SellerBid> bids) {
  if (bids.size() != scenario.sellers.size()) {
    throw InvalidInputError("expected " + std::to_string(scenario.sellers.size()) +
                            " bids, got " + std::to_string(bids.size()));
  }
  for (std::size_t i = 0; i < bids.size(); ++i) {
    const auto& s = scenario.sellers[i];
    const auto& b = bids[i];
    const std::string who = "bid for seller " + std::to_string(s.id);
    if (b.seller_id != s.id)
      throw InvalidInputError("bid at position " + std::to_string(i) + " names seller " +
                              std::to_string(b.seller_id) + ", expected " +
                              std::to_string(s.id));
    if (!std::isfinite(b.cost) || !s.cost_range().contains(b.cost, 1e-12))
      throw InvalidInputError(who + ": reported cost outside the cost range");
    if (!std::isfinite(b.capacity) || !s.capacity_range().contains(b.capacity, 1e-12))
      throw InvalidInputError(who + ": reported capacity outside the capacity range");
  }
}

bool satisfies_constraints(const Scenario& scenario, std::span<const SellerBid> bids,
                           const Allocation& allocation, double tol) {
  const auto& x = allocation.quantities;
  if (x.size() != scenario.sellers.size() || bids.size() != x.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < -tol || x[i] > bids[i].capacity + tol) return false;
  }
  const BinaryMatrix m = coverage_matrix(scenario);
  for (std::size_t j = 0; j < scenario.items.size(); ++j) {
    double covered = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) covered += m[j][i] * x[i];
    if (covered < scenario.items[j].demand - tol) return false;
  }
  return true;
}

}  // namespace optauction
