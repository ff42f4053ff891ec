// Acceptance gate. Prints one PASS/FAIL line per criterion followed by
// indented findings. Usage: optauction_acceptance [criterion ...]
// (1..7, default all). Exit status is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "optauction/auction.hpp"
#include "optauction/error.hpp"
#include "optauction/lp.hpp"
#include "optauction/mechanism.hpp"
#include "optauction/model.hpp"
#include "optauction/ocax.hpp"
#include "optauction/verify.hpp"
#include "oracles.hpp"

namespace {

using namespace optauction;

// Tolerances and sizes.
constexpr double kLpTolerance = 1e-6;
constexpr double kMechanismTolerance = 1e-6;
constexpr double kVickreyTolerance = 1e-9;
constexpr double kExampleRuntimeSeconds = 1.0;
constexpr double kSuiteRuntimeSeconds = 60.0;
constexpr int kRegularScenarios = 20;
constexpr std::size_t kOpponentProfiles = 4;
constexpr int kVickreyDraws = 1000;
constexpr int kCoverInstances = 100;
constexpr int kXorPaymentInstances = 100;
constexpr int kXorDsicInstances = 20;
constexpr int kXorGrid = 21;
constexpr int kRegionInstances = 10;
constexpr int kRegionGrid = 64;

struct Verdict {
  bool passed = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    passed = passed && ok;
    notes.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void info(const std::string& what) { notes.push_back("info  " + what); }
};

template <typename... Args>
std::string str(const Args&... args) {
  std::ostringstream s;
  s << std::setprecision(12);
  (s << ... << args);
  return s.str();
}

std::string vec(const std::vector<double>& v) {
  std::ostringstream s;
  s << std::setprecision(12) << "(";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str() + ")";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- 1 ---------------------------------------------------------------------

Verdict example2_kth_price() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const double true_cost = 6.0;
  auto bids = gen::example2_truthful_bids();
  const auto truthful = auction::kth_price_auction(bids, 1000.0);
  bids[3].capacity = 490.0;
  const auto shaded = auction::kth_price_auction(bids, 1000.0);

  const std::vector<double> want_truthful{0, 500, 0, 500};
  const std::vector<double> want_shaded{10, 500, 0, 490};
  v.check(truthful.allocation.quantities == want_truthful,
          "truthful allocation " + vec(truthful.allocation.quantities) + " == (0,500,0,500)");
  v.check(truthful.payments[3] == 5000.0, str("truthful payment to S4 ", truthful.payments[3], " == 5000"));
  v.check(shaded.allocation.quantities == want_shaded,
          "shaded allocation " + vec(shaded.allocation.quantities) + " == (10,500,0,490)");
  v.check(shaded.payments[3] == 5880.0, str("shaded payment to S4 ", shaded.payments[3], " == 5880"));

  const double u_truthful = truthful.payments[3] - true_cost * truthful.allocation.quantities[3];
  const double u_shaded = shaded.payments[3] - true_cost * shaded.allocation.quantities[3];
  const double gain = u_shaded - u_truthful;
  v.check(gain > 0.0, str("utility gain ", gain, " > 0"));
  v.check(gain == 880.0, str("utility gain ", gain, " == 880"));
  v.info(str("payment difference 5880 - 5000 = ", shaded.payments[3] - truthful.payments[3],
             "; production cost saved 6 x 10 = ", true_cost * 10.0,
             "; so the gain in utility is ", gain));
  const double t = seconds_since(t0);
  v.check(t < kExampleRuntimeSeconds, str("runtime ", t, " s < 1 s"));
  return v;
}

// --- 2 ---------------------------------------------------------------------

Verdict example3_winner_determination() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = gen::example3_scenario();
  const auto bids = gen::example3_truthful_bids();
  const auto h = auction::virtual_costs(s, bids);
  const auto lp = auction::winner_determination_lp(s, bids, h);

  // Reference rows of the worked example: B needs 250 from everyone, C and D need 100 from
  // sellers 3 and 4.
  struct Row {
    const char* item;
    std::vector<std::uint8_t> coefficients;
    double demand;
  };
  const std::vector<Row> reference{{"B", {1, 1, 1, 1}, 250.0},
                                   {"C", {0, 0, 1, 1}, 100.0},
                                   {"D", {0, 0, 1, 1}, 100.0}};
  for (const auto& row : reference) {
    std::size_t j = 0;
    while (j < s.items.size() && s.items[j].id != row.item) ++j;
    const bool found = j < s.items.size();
    v.check(found && lp.coverage[j] == row.coefficients && lp.demand[j] == row.demand,
            str("row ", row.item, " matches the reference constraint"));
  }
  v.check(lp.upper == std::vector<double>{100, 100, 150, 120}, "capacity bounds (100,100,150,120)");
  std::string a_row;
  for (auto c : lp.coverage[0]) a_row += std::to_string(c) + " ";
  v.info("item A row from bundle membership: " + a_row + ">= 100 (the worked example writes x1 + x2)");

  const auto sol = lp::solve(lp);
  const auto oracle = oracle::lp_vertex_enumeration(lp);
  v.check(sol.status == lp::LpStatus::optimal && oracle.has_value(), "LP and oracle both optimal");
  if (oracle) {
    v.check(std::abs(sol.objective - oracle->objective) <= kLpTolerance,
            str("objective ", sol.objective, " vs oracle ", oracle->objective, " within 1e-6"));
    double dx = 0.0;
    for (std::size_t i = 0; i < sol.x.size(); ++i) dx = std::max(dx, std::abs(sol.x[i] - oracle->x[i]));
    v.check(dx <= kLpTolerance, "x " + vec(sol.x) + " vs oracle " + vec(oracle->x));
    v.info(str("virtual costs ", vec(h), ", oracle saw ", oracle->vertices, " feasible vertices"));
  }
  const double t = seconds_since(t0);
  v.check(t < kExampleRuntimeSeconds, str("runtime ", t, " s < 1 s"));
  return v;
}

// --- 3 and 4 ---------------------------------------------------------------

struct Certification {
  int sellers = 0;
  int condition_failures[3] = {0, 0, 0};
  std::size_t points[3] = {0, 0, 0};
  double worst_gap = 0.0;
  std::string first_failure;
  std::string worst_gap_at;
  double seconds = 0.0;
};

const Certification& certify_regular_scenarios() {
  static const Certification result = [] {
    Certification c;
    const auto t0 = std::chrono::steady_clock::now();
    const OptimalAuction mech;
    for (int seed = 0; seed < kRegularScenarios; ++seed) {
      const auto s = gen::regular_scenario(static_cast<std::uint64_t>(seed));
      const auto profiles = verify::sample_truthful_profiles(s, kOpponentProfiles, seed);
      const auto truth = verify::sample_truthful_profiles(s, 1, seed + 1000).front();
      for (std::size_t i = 0; i < s.sellers.size(); ++i) {
        ++c.sellers;
        const auto th = verify::check_incentive_conditions(mech, s, i, profiles, verify::Mode::dominant);
        const verify::ConditionResult* conds[3] = {&th.condition1, &th.condition2, &th.condition3};
        for (int k = 0; k < 3; ++k) {
          c.points[k] += conds[k]->checked;
          if (!conds[k]->passed) {
            ++c.condition_failures[k];
            if (c.first_failure.empty())
              c.first_failure = str("seed ", seed, " seller ", i + 1, " condition ", k + 1, ": ",
                                    conds[k]->detail);
          }
        }
        const auto br = verify::best_response_gap(mech, s, i, {truth[i].cost, truth[i].capacity},
                                                  profiles, verify::Mode::dominant);
        if (br.gap > c.worst_gap || c.worst_gap_at.empty()) {
          c.worst_gap = std::max(c.worst_gap, br.gap);
          c.worst_gap_at = str("seed ", seed, " seller ", i + 1, " bid (", br.best_bid.cost, ", ",
                               br.best_bid.capacity, ")");
        }
      }
    }
    c.seconds = seconds_since(t0);
    return c;
  }();
  return result;
}

Verdict incentive_certification() {
  Verdict v;
  const auto& c = certify_regular_scenarios();
  const char* names[3] = {"payment identity within 1e-6", "rho >= 0 and non-decreasing in capacity",
                          "X non-increasing in cost"};
  for (int k = 0; k < 3; ++k) {
    v.check(c.condition_failures[k] == 0,
            str("condition ", k + 1, " (", names[k], "): ", c.sellers - c.condition_failures[k], "/",
                c.sellers, " sellers pass, ", c.points[k], " checks"));
  }
  if (!c.first_failure.empty()) v.info(c.first_failure);
  v.check(c.seconds < kSuiteRuntimeSeconds, str("runtime ", c.seconds, " s < 60 s (shared with 4)"));
  return v;
}

Verdict dsic_grid() {
  Verdict v;
  const auto& c = certify_regular_scenarios();
  v.check(c.worst_gap <= kMechanismTolerance,
          str("worst best-response gap ", c.worst_gap, " <= 1e-6 over ", c.sellers,
              " sellers, 21x11 grids, ", kOpponentProfiles, " opponent profiles each"));
  v.info("worst at " + c.worst_gap_at);
  return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict vickrey_equivalence() {
  Verdict v;
  gen::Rng rng(5);
  const dist::UnivariateSpec unit{{0.0, 1.0}, dist::UniformShape{}};
  int sales = 0, winner_ok = 0, second_price_ok = 0, reserve_ok = 0;
  std::string first_mismatch;
  for (int d = 0; d < kVickreyDraws; ++d) {
    auction::MyersonSingleItemInstance inst;
    for (int b = 0; b < 4; ++b) {
      inst.valuations.push_back(gen::uniform(rng, 0.0, 1.0));
      inst.distributions.push_back(unit);
    }
    const auto r = auction::myerson_single_item(inst);
    if (!r.winner) continue;
    ++sales;
    auto sorted = inst.valuations;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto top = static_cast<std::size_t>(
        std::max_element(inst.valuations.begin(), inst.valuations.end()) - inst.valuations.begin());
    if (*r.winner == top) ++winner_ok;
    if (std::abs(r.payment - sorted[1]) <= kVickreyTolerance) {
      ++second_price_ok;
    } else if (first_mismatch.empty()) {
      first_mismatch = str("draw ", d, ": second-highest ", sorted[1], ", paid ", r.payment);
    }
    // Same rule with the reserve at which the virtual value turns positive.
    if (std::abs(r.payment - std::max(sorted[1], 0.5)) <= kVickreyTolerance) ++reserve_ok;
  }
  v.check(winner_ok == sales, str("winner is the highest valuation in ", winner_ok, "/", sales, " sales"));
  v.check(second_price_ok == sales,
          str("payment equals the second-highest valuation in ", second_price_ok, "/", sales, " sales"));
  if (!first_mismatch.empty()) v.info("first mismatch " + first_mismatch);
  v.info(str("payment equals max(second-highest, 0.5) in ", reserve_ok, "/", sales, " sales; ",
             kVickreyDraws - sales, " draws had no sale (all valuations <= 0.5)"));
  return v;
}

// --- 6 ---------------------------------------------------------------------

double xor_utility(const ocax::XorScenario& s, std::size_t b, std::array<double, 2> report,
                   std::array<double, 2> truth) {
  auto t = s;
  t.bidders[b].bids = report;
  const auto pay = ocax::ocax_payment(t, b);
  double cost = 0.0;
  if (pay.won == ocax::Choice::first) cost = truth[0];
  if (pay.won == ocax::Choice::second) cost = truth[1];
  return pay.payment - cost;
}

Verdict ocax_exactness_and_ic() {
  Verdict v;
  gen::Rng rng(6);
  int exact = 0;
  for (int t = 0; t < kCoverInstances; ++t) {
    const auto p = gen::cover_problem(rng, gen::uniform_int(rng, 2, 6), gen::uniform_int(rng, 2, 6));
    const auto sol = ocax::solve_cover(p);
    const auto best = oracle::exhaustive_cover(p);
    if (sol && best && sol->objective == best->objective && sol->selection.choice == best->choice) ++exact;
  }
  v.check(exact == kCoverInstances,
          str("branch and bound equals enumeration on ", exact, "/", kCoverInstances, " instances"));

  int winners = 0, critical_ok = 0, path_ok = 0, payments = 0;
  double worst_critical = 0.0, worst_path = 0.0;
  for (int seed = 0; seed < kXorPaymentInstances; ++seed) {
    const auto s = gen::xor_scenario(static_cast<std::uint64_t>(seed), 3 + seed % 2, 4);
    for (std::size_t b = 0; b < s.bidders.size(); ++b) {
      ++payments;
      ocax::OcaxPayment pay;
      try {
        pay = ocax::ocax_payment(s, b);
      } catch (const Error&) {
        worst_path = std::numeric_limits<double>::infinity();
        continue;
      }
      const double dp = std::abs(pay.utility_integral - pay.utility_integral_alt);
      worst_path = std::max(worst_path, dp);
      if (dp <= kMechanismTolerance) ++path_ok;
      if (pay.won == ocax::Choice::none) continue;
      ++winners;
      const auto& crit = pay.critical_cost[pay.won == ocax::Choice::first ? 0 : 1];
      const double d = crit ? std::abs(pay.payment - *crit) : std::numeric_limits<double>::infinity();
      worst_critical = std::max(worst_critical, d);
      if (d <= kMechanismTolerance) ++critical_ok;
    }
  }
  v.check(critical_ok == winners, str("integral payment equals critical cost for ", critical_ok, "/",
                                      winners, " winners (worst ", worst_critical, ")"));
  v.check(path_ok == payments, str("both integration orders agree for ", path_ok, "/", payments,
                                   " bidders (worst ", worst_path, ")"));

  double worst_gap = 0.0;
  std::string worst_at = "none";
  int errors = 0;
  for (int seed = 0; seed < kXorDsicInstances; ++seed) {
    const auto s = gen::xor_scenario(static_cast<std::uint64_t>(1000 + seed), 3, 4);
    for (std::size_t b = 0; b < s.bidders.size(); ++b) {
      const auto truth = s.bidders[b].bids;
      const auto range = s.bidders[b].cost_range;
      try {
        const double honest = xor_utility(s, b, truth, truth);
        for (int r = 0; r < kXorGrid; ++r) {
          for (int c = 0; c < kXorGrid; ++c) {
            const std::array<double, 2> report{range.lattice(r, kXorGrid), range.lattice(c, kXorGrid)};
            const double gain = xor_utility(s, b, report, truth) - honest;
            if (gain > worst_gap) {
              worst_gap = gain;
              worst_at = str("seed ", 1000 + seed, " bidder ", b + 1, " report (", report[0], ", ",
                             report[1], ")");
            }
          }
        }
      } catch (const Error& e) {
        ++errors;
        worst_at = str("seed ", 1000 + seed, " bidder ", b + 1, ": ", e.what());
      }
    }
  }
  v.check(errors == 0 && worst_gap <= kMechanismTolerance,
          str("XOR best-response gap ", worst_gap, " <= 1e-6 on ", kXorDsicInstances,
              " three-bidder instances, 21x21 misreports"));
  v.info("worst at " + worst_at);
  return v;
}

// --- 7 ---------------------------------------------------------------------

Verdict region_partition() {
  Verdict v;
  int label_mismatches = 0, closed_violations = 0, corner_cases = 0, corner_failures = 0;
  std::string first_corner;
  long points = 0;
  for (int seed = 0; seed < kRegionInstances; ++seed) {
    const auto s = gen::xor_scenario(static_cast<std::uint64_t>(700 + seed), 3, 4);
    for (std::size_t b = 0; b < s.bidders.size(); ++b) {
      const auto g = ocax::region_partition(s, b, kRegionGrid);
      std::vector<std::array<double, 2>> h;
      for (const auto& bidder : s.bidders) {
        h.push_back({dist::virtual_cost(bidder.distributions[0], bidder.bids[0]),
                     dist::virtual_cost(bidder.distributions[1], bidder.bids[1])});
      }
      for (int r = 0; r < kRegionGrid; ++r) {
        for (int c = 0; c < kRegionGrid; ++c) {
          h[b] = {dist::virtual_cost(s.bidders[b].distributions[0], g.axis[r]),
                  dist::virtual_cost(s.bidders[b].distributions[1], g.axis[c])};
          const auto best = oracle::exhaustive_cover(ocax::cover_problem(s, h));
          const int want = !best ? 0
                           : best->choice[b] == ocax::Choice::first  ? 1
                           : best->choice[b] == ocax::Choice::second ? 2
                                                                     : 3;
          ++points;
          if (g.label(r, c) != want) ++label_mismatches;
        }
      }
      // Downward closedness recomputed from the labels.
      for (int c = 0; c < kRegionGrid; ++c) {
        for (int r = 1; r < kRegionGrid; ++r) {
          if (g.label(r, c) == 1 && g.label(r - 1, c) != 1) ++closed_violations;
          if (g.label(c, r) == 2 && g.label(c, r - 1) != 2) ++closed_violations;
        }
      }
      // Can the others cover without this bidder?
      auto p = ocax::cover_problem(s, h);
      p.masks[b] = {0, 0};
      if (oracle::exhaustive_cover(p)) {
        ++corner_cases;
        const int top = g.label(kRegionGrid - 1, kRegionGrid - 1);
        if (top != 3) {
          ++corner_failures;
          if (first_corner.empty())
            first_corner = str("seed ", 700 + seed, " bidder ", b + 1, " wins bundle ", top,
                               " at the top corner");
        }
      }
    }
  }
  v.check(label_mismatches == 0,
          str(points - label_mismatches, "/", points, " lattice labels match per-point enumeration"));
  v.check(closed_violations == 0, str(closed_violations, " downward-closedness violations in regions 1 and 2"));
  v.check(corner_failures == 0, str("top corner loses in ", corner_cases - corner_failures, "/",
                                    corner_cases, " cases where the others cover alone"));
  if (!first_corner.empty()) v.info(first_corner);
  return v;
}

struct Criterion {
  int number;
  const char* title;
  Verdict (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Example 2 k-th price reproduction", example2_kth_price},
      {2, "Example 3 winner determination", example3_winner_determination},
      {3, "incentive conditions on 20 regular scenarios", incentive_certification},
      {4, "dominant-strategy best-response gap", dsic_grid},
      {5, "symmetric Myerson auction is second price", vickrey_equivalence},
      {6, "XOR branch and bound, payments and incentives", ocax_exactness_and_ic},
      {7, "XOR region partition", region_partition},
  };
  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.push_back(std::atoi(argv[a]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.number) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.check(false, std::string("unexpected exception: ") + e.what());
    }
    const double t = seconds_since(t0);
    std::cout << (v.passed ? "PASS" : "FAIL") << "  criterion " << c.number << "  " << c.title << "  ["
              << std::fixed << std::setprecision(2) << t << " s]\n";
    std::cout.unsetf(std::ios::fixed);
    for (const auto& n : v.notes) std::cout << "        " << n << "\n";
    if (!v.passed) ++failed;
  }
  return failed;
}
