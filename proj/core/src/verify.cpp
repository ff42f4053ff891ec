#include "optauction/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optauction/error.hpp"
#include "optauction/step_function.hpp"

namespace optauction::verify {
namespace {

std::vector<double> lattice(Interval range, int points) {
  if (points < 1) throw InvalidInputError("verify: grid needs at least one point");
  if (points == 1 || !(range.lo < range.hi)) return {range.lo};
  std::vector<double> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) out.push_back(range.lattice(k, points));
  return out;
}

std::optional<Interval> support_at(const SellerSpec& spec, double capacity) {
  try {
    return dist::conditional_cost_support(spec.distribution, capacity);
  } catch (const Error&) {
    return std::nullopt;
  }
}

void require_profiles(const Scenario& scenario, std::size_t seller,
                      std::span<const std::vector<SellerBid>> profiles) {
  if (seller >= scenario.sellers.size()) throw InvalidInputError("verify: seller out of range");
  if (profiles.empty()) throw InvalidInputError("verify: at least one opponent profile required");
  for (const auto& p : profiles) {
    if (p.size() != scenario.sellers.size())
      throw InvalidInputError("verify: every profile needs one bid per seller");
  }
}

// Tracks the largest excess over an allowance and the first failure.
class Tally {
 public:
  void add(double excess, const std::string& where) {
    ++result_.checked;
    if (excess > 0.0) {
      if (result_.passed) result_.detail = where;
      result_.passed = false;
      result_.worst = std::max(result_.worst, excess);
    }
  }
  ConditionResult result() const { return result_; }

 private:
  ConditionResult result_;
};

std::string at(double cost, double capacity, std::size_t profile) {
  std::ostringstream out;
  out.precision(10);
  out << "bid (" << cost << ", " << capacity << ") profile " << profile;
  return out.str();
}

struct LatticeSample {
  bool present = false;
  std::vector<double> surplus;   // per profile
  std::vector<double> quantity;  // per profile
  std::vector<double> identity;  // per profile residual of condition 1
};

}  // namespace

std::vector<std::vector<SellerBid>> sample_truthful_profiles(const Scenario& scenario,
                                                             std::size_t count,
                                                             std::uint64_t seed) {
  dist::Rng rng(seed);
  std::vector<std::vector<SellerBid>> out(count);
  for (auto& profile : out) {
    profile.reserve(scenario.sellers.size());
    for (const auto& s : scenario.sellers) {
      const dist::Type t = dist::sample_type(s.distribution, rng);
      profile.push_back({s.id, t.cost, t.capacity});
    }
  }
  return out;
}

UtilityEvaluation evaluate_utility(const Mechanism& mechanism, const Scenario& scenario,
                                   std::span<const SellerBid> profile, std::size_t seller,
                                   dist::Type true_type, SellerBid bid) {
  std::vector<SellerBid> local(profile.begin(), profile.end());
  local.at(seller) = bid;
  const SellerResult r = mechanism.run_for(scenario, local, seller);
  UtilityEvaluation e;
  e.seller_id = scenario.sellers.at(seller).id;
  e.true_type = true_type;
  e.bid = bid;
  e.quantity = r.quantity;
  e.payment = r.payment;
  e.utility = r.payment - true_type.cost * r.quantity;
  return e;
}

Estimate estimate(std::span<const double> values) {
  Estimate e;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  const double n = static_cast<double>(values.size());
  e.standard_error = std::sqrt(ss / (n - 1.0) / n);
  return e;
}

ExpectedStats expected_stats(const Mechanism& mechanism, const Scenario& scenario,
                             std::size_t seller, dist::Type true_type, SellerBid bid,
                             std::span<const std::vector<SellerBid>> profiles) {
  require_profiles(scenario, seller, profiles);
  std::vector<double> x, t, u, rho;
  for (const auto& p : profiles) {
    const auto e = evaluate_utility(mechanism, scenario, p, seller, true_type, bid);
    x.push_back(e.quantity);
    t.push_back(e.payment);
    u.push_back(e.utility);
    rho.push_back(e.payment - bid.cost * e.quantity);
  }
  ExpectedStats s;
  s.seller_id = scenario.sellers[seller].id;
  s.samples = profiles.size();
  s.quantity = estimate(x);
  s.payment = estimate(t);
  s.utility = estimate(u);
  s.surplus = estimate(rho);
  return s;
}

BestResponse best_response_gap(const Mechanism& mechanism, const Scenario& scenario,
                               std::size_t seller, dist::Type true_type,
                               std::span<const std::vector<SellerBid>> profiles, Mode mode,
                               const GridOptions& grid) {
  require_profiles(scenario, seller, profiles);
  const SellerSpec& spec = scenario.sellers[seller];
  const std::size_t np = profiles.size();
  const SellerBid truth{spec.id, true_type.cost, true_type.capacity};

  std::vector<double> truthful(np);
  for (std::size_t p = 0; p < np; ++p) {
    truthful[p] = evaluate_utility(mechanism, scenario, profiles[p], seller, true_type, truth).utility;
  }

  std::vector<SellerBid> bids;
  std::vector<std::vector<double>> utility;  // [bid][profile]
  BestResponse out;
  const auto costs = lattice(spec.cost_range(), grid.cost_points);
  const auto capacities =
      lattice({spec.capacity_range().lo, true_type.capacity}, grid.capacity_points);
  for (double q : capacities) {
    const auto support = support_at(spec, q);
    std::vector<double> inside;
    for (double c : costs) {
      if (support && support->contains(c, 1e-12)) inside.push_back(std::clamp(c, support->lo, support->hi));
    }
    out.skipped_bids += costs.size() - inside.size();
    if (inside.empty()) continue;
    const std::size_t first = bids.size();
    for (double c : inside) {
      bids.push_back({spec.id, c, q});
      utility.emplace_back(np);
    }
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<SellerBid> local = profiles[p];
      local[seller] = {spec.id, inside.front(), q};
      const auto results = mechanism.run_for_costs(scenario, local, seller, inside);
      for (std::size_t k = 0; k < inside.size(); ++k) {
        utility[first + k][p] = results[k].payment - true_type.cost * results[k].quantity;
      }
    }
  }
  out.grid_bids = bids.size();
  if (bids.empty()) return out;

  bool have = false;
  for (std::size_t b = 0; b < bids.size(); ++b) {
    double gain, best, base;
    if (mode == Mode::dominant) {
      std::size_t worst = 0;
      for (std::size_t p = 1; p < np; ++p) {
        if (utility[b][p] - truthful[p] > utility[b][worst] - truthful[worst]) worst = p;
      }
      best = utility[b][worst];
      base = truthful[worst];
      gain = best - base;
    } else {
      best = estimate(utility[b]).mean;
      base = estimate(truthful).mean;
      gain = best - base;
    }
    if (!have || gain > out.gap) {
      have = true;
      out.gap = gain;
      out.best_bid = bids[b];
      out.best_utility = best;
      out.truthful_utility = base;
    }
  }
  return out;
}

IncentiveReport check_incentive_conditions(const Mechanism& mechanism, const Scenario& scenario,
                              std::size_t seller,
                              std::span<const std::vector<SellerBid>> profiles, Mode mode,
                              const GridOptions& grid) {
  require_profiles(scenario, seller, profiles);
  const SellerSpec& spec = scenario.sellers[seller];
  const std::size_t np = profiles.size();
  const auto costs = lattice(spec.cost_range(), grid.cost_points);
  const auto capacities = lattice(spec.capacity_range(), grid.capacity_points);

  IncentiveReport report;
  report.seller_id = spec.id;

  TraceOptions trace;
  trace.require_non_increasing = false;  // condition 3 reports monotonicity itself
  trace.resolution = 1e-12;

  // samples[a][k]: capacity index a, cost index k.
  std::vector<std::vector<LatticeSample>> samples(capacities.size(),
                                                  std::vector<LatticeSample>(costs.size()));
  for (std::size_t a = 0; a < capacities.size(); ++a) {
    const double q = capacities[a];
    const auto support = support_at(spec, q);
    std::vector<double> inside;
    std::vector<std::size_t> index;
    for (std::size_t k = 0; k < costs.size(); ++k) {
      if (support && support->contains(costs[k], 1e-12)) {
        inside.push_back(std::clamp(costs[k], support->lo, support->hi));
        index.push_back(k);
      }
    }
    report.skipped_bids += costs.size() - inside.size();
    if (inside.empty()) continue;
    for (std::size_t k : index) samples[a][k].present = true;
    const double top = support->hi;
    std::vector<double> evaluated = inside;
    evaluated.push_back(top);

    for (std::size_t p = 0; p < np; ++p) {
      std::vector<SellerBid> local = profiles[p];
      local[seller] = {spec.id, support->lo, q};
      const auto results = mechanism.run_for_costs(scenario, local, seller, evaluated);
      const auto quantity_at = [&](double t) {
        std::vector<SellerBid> probe = local;
        probe[seller].cost = t;
        return mechanism.allocate(scenario, probe)[seller];
      };
      const StepFunction curve = trace_step_function(quantity_at, support->lo, top, trace);
      const double top_surplus = results.back().payment - top * results.back().quantity;
      for (std::size_t i = 0; i < inside.size(); ++i) {
        auto& s = samples[a][index[i]];
        const double rho = results[i].payment - inside[i] * results[i].quantity;
        s.surplus.push_back(rho);
        s.quantity.push_back(results[i].quantity);
        s.identity.push_back(rho - top_surplus - curve.integral(inside[i], top));
      }
    }
  }

  const double tol = kDeterministicTolerance;
  // Excess of `values` above zero, per profile or on the mean.
  const auto check_at_most_zero = [&](Tally& tally, const std::vector<double>& values,
                                      double cost, double capacity) {
    if (mode == Mode::dominant) {
      for (std::size_t p = 0; p < values.size(); ++p) tally.add(values[p] - tol, at(cost, capacity, p));
    } else {
      const Estimate e = estimate(values);
      tally.add(e.mean - (kStandardErrors * e.standard_error + tol), at(cost, capacity, 0) + " (mean)");
    }
  };
  const auto difference = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) d[p] = a[p] - b[p];
    return d;
  };
  const auto negated = [](std::vector<double> v) {
    for (double& x : v) x = -x;
    return v;
  };

  Tally c1, c2, c3;
  for (std::size_t a = 0; a < capacities.size(); ++a) {
    for (std::size_t k = 0; k < costs.size(); ++k) {
      const auto& s = samples[a][k];
      if (!s.present) continue;
      if (mode == Mode::dominant) {
        std::vector<double> magnitude(s.identity.size());
        for (std::size_t p = 0; p < magnitude.size(); ++p) magnitude[p] = std::abs(s.identity[p]);
        check_at_most_zero(c1, magnitude, costs[k], capacities[a]);
      } else {
        const Estimate e = estimate(s.identity);
        c1.add(std::abs(e.mean) - (kStandardErrors * e.standard_error + tol),
               at(costs[k], capacities[a], 0) + " (mean)");
      }
      check_at_most_zero(c2, negated(s.surplus), costs[k], capacities[a]);
      if (a + 1 < capacities.size() && samples[a + 1][k].present) {
        check_at_most_zero(c2, difference(s.surplus, samples[a + 1][k].surplus), costs[k],
                           capacities[a + 1]);
      }
      if (k + 1 < costs.size() && samples[a][k + 1].present) {
        check_at_most_zero(c3, difference(samples[a][k + 1].quantity, s.quantity), costs[k + 1],
                           capacities[a]);
      }
    }
  }
  report.condition1 = c1.result();
  report.condition2 = c2.result();
  report.condition3 = c3.result();
  return report;
}

CostEstimate expected_cost(const Mechanism& mechanism, const Scenario& scenario,
                           std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInputError("expected_cost: samples must be at least 1");
  const auto profiles = sample_truthful_profiles(scenario, samples, seed);
  std::vector<double> totals;
  totals.reserve(samples);
  for (const auto& p : profiles) totals.push_back(mechanism.run(scenario, p).total_payment());
  const Estimate e = estimate(totals);
  return {e.mean, e.standard_error, samples};
}

}  // namespace optauction::verify
