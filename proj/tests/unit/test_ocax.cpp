#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "optauction/error.hpp"
#include "optauction/ocax.hpp"
#include "oracles.hpp"

using namespace optauction;
using namespace optauction::ocax;

namespace {

dist::UnivariateSpec unit_uniform() { return {{0.0, 1.0}, dist::UniformShape{}}; }

XorBidder bidder(int id, std::vector<std::string> b1, std::vector<std::string> b2, double c1,
                 double c2) {
  return {id, {std::move(b1), std::move(b2)}, {0.0, 1.0}, {unit_uniform(), unit_uniform()}, {c1, c2}};
}

// Items {A, B}; bidder 1 offers {A} or {B}, bidder 2 offers {B} or {A}.
XorScenario two_bidders(double a1, double b1, double b2, double a2) {
  return {{"A", "B"}, {bidder(1, {"A"}, {"B"}, a1, b1), bidder(2, {"B"}, {"A"}, b2, a2)}};
}

}  // namespace

TEST(SolveCover, TwoBidderExample) {
  CoverProblem p{2, {{0b01, 0b10}, {0b10, 0b01}}, {{3.0, 4.0}, {2.0, 5.0}}};
  const auto sol = solve_cover(p);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->selection.choice, (std::vector<Choice>{Choice::first, Choice::first}));
  EXPECT_DOUBLE_EQ(sol->objective, 5.0);
  const auto oracle = oracle::exhaustive_cover(p);
  EXPECT_EQ(oracle->choice, sol->selection.choice);
}

TEST(SolveCover, ForcedSingleBidderCover) {
  CoverProblem p{3, {{0b111, 0b001}}, {{1.0, 2.0}}};
  const auto sol = solve_cover(p);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->selection.choice[0], Choice::first);
}

TEST(SolveCover, UncoverableIsNullopt) {
  CoverProblem p{3, {{0b001, 0b010}}, {{1.0, 2.0}}};
  EXPECT_FALSE(solve_cover(p));
}

TEST(SolveCover, NegativeCoefficientsAreTaken) {
  CoverProblem p{1, {{0b1, 0b1}, {0b1, 0b1}}, {{1.0, 2.0}, {-0.5, 3.0}}};
  const auto sol = solve_cover(p);
  ASSERT_TRUE(sol);
  EXPECT_DOUBLE_EQ(sol->objective, -0.5);
}

TEST(OcaxProperty, BranchAndBoundMatchesExhaustive) {
  gen::Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const int bidders = gen::uniform_int(rng, 2, 6);
    const int items = gen::uniform_int(rng, 2, 5);
    const auto p = gen::cover_problem(rng, bidders, items);
    const auto sol = solve_cover(p);
    const auto best = oracle::exhaustive_cover(p);
    ASSERT_TRUE(sol && best);
    EXPECT_NEAR(sol->objective, best->objective, 1e-12) << "instance " << t;
    EXPECT_EQ(sol->selection.choice, best->choice) << "instance " << t;
  }
}

TEST(SolveOcax, ValidatesAndRefuses) {
  auto s = two_bidders(0.2, 0.3, 0.1, 0.6);
  EXPECT_NO_THROW(solve_ocax(s));
  s.bidders[0].bundles[1] = {"A"};
  EXPECT_THROW(solve_ocax(s), InvalidInputError);
  s = two_bidders(0.2, 0.3, 0.1, 0.6);
  s.bidders[1].distributions[0] = {{0.0, 1.0}, dist::HistogramShape{{0.1, 0.9}}};
  EXPECT_THROW(solve_ocax(s), NotRegularError);
  s = two_bidders(0.2, 0.3, 0.1, 0.6);
  s.items.push_back("C");
  EXPECT_THROW(solve_ocax(s), InvalidInputError);
}

TEST(SolveOcax, SelectionIsXorFeasible) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = gen::xor_scenario(seed, 4, 4);
    const auto r = solve_ocax(s);
    const auto best = oracle::exhaustive_cover(cover_problem(s, r.virtual_costs));
    EXPECT_NEAR(r.objective, best->objective, 1e-12);
  }
}

TEST(OcaxPayment, LoserPaysNothing) {
  // Bidders 1 and 3 cover {A, B} between them far more cheaply than bidder 2.
  const XorScenario s{{"A", "B"},
                      {bidder(1, {"A"}, {"B"}, 0.1, 0.1), bidder(2, {"B"}, {"A"}, 0.9, 0.95),
                       bidder(3, {"B"}, {"A"}, 0.1, 0.1)}};
  const auto pay = ocax_payment(s, 1);
  EXPECT_EQ(pay.won, Choice::none);
  EXPECT_EQ(pay.payment, 0.0);
  // It would displace bidder 3 on {B} below cost 0.1.
  ASSERT_TRUE(pay.critical_cost[0]);
  EXPECT_NEAR(*pay.critical_cost[0], 0.1, 1e-6);
}

TEST(OcaxPayment, SoleSupplierOfAnItemIsPaidTop) {
  // Only bidder 1's first bundle holds B.
  const XorScenario s{{"A", "B", "C"},
                      {bidder(1, {"A", "B"}, {"C"}, 0.3, 0.7), bidder(2, {"C"}, {"A"}, 0.2, 0.9)}};
  const auto pay = ocax_payment(s, 0);
  EXPECT_EQ(pay.won, Choice::first);
  EXPECT_NEAR(pay.payment, 1.0, 1e-9);
}

TEST(OcaxPayment, WinnerPaysCriticalCost) {
  // H = 2c on U[0,1]. Bidder 1 wins {A} (H 0.4) next to bidder 2 on {B}
  // (H 0.2). With its {B} cost at the top the only rival cover is
  // 1:{B} + 2:{A} at 2 + 1.2, so bidder 1 keeps {A} over the whole range.
  const auto s = two_bidders(0.2, 0.3, 0.1, 0.6);
  const auto r = solve_ocax(s);
  ASSERT_EQ(r.selection.choice[0], Choice::first);
  const auto pay = ocax_payment(s, 0);
  ASSERT_EQ(pay.won, Choice::first);
  ASSERT_TRUE(pay.critical_cost[0]);
  EXPECT_NEAR(pay.payment, *pay.critical_cost[0], 1e-6);
  EXPECT_NEAR(pay.payment, 1.0, 1e-6);
}

TEST(OcaxProperty, PathIndependentAndCritical) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = gen::xor_scenario(seed, 3, 3);
    for (std::size_t b = 0; b < s.bidders.size(); ++b) {
      const auto pay = ocax_payment(s, b);
      EXPECT_NEAR(pay.utility_integral, pay.utility_integral_alt, kPathTolerance);
      if (pay.won != Choice::none) {
        const int j = pay.won == Choice::first ? 0 : 1;
        ASSERT_TRUE(pay.critical_cost[j]);
        EXPECT_NEAR(pay.payment, *pay.critical_cost[j], kPathTolerance) << "seed " << seed;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(RegionPartition, CornersOnlyTopLosesWhenCompetitorsCover) {
  // Bidders 2 and 3 cover {A, B} between them at H 0.4.
  const XorScenario s{{"A", "B"},
                      {bidder(1, {"A"}, {"B"}, 0.05, 0.05), bidder(2, {"A"}, {"B"}, 0.1, 0.9),
                       bidder(3, {"B"}, {"A"}, 0.1, 0.9)}};
  const auto g = region_partition(s, 0, 2);
  EXPECT_TRUE(g.competitors_cover_alone);
  EXPECT_EQ(g.label(0, 0), 1);
  EXPECT_EQ(g.label(1, 1), 3);
  EXPECT_TRUE(g.violations.empty());
  // Two single-item bidders cannot cover both items on their own.
  EXPECT_FALSE(region_partition(two_bidders(0.2, 0.3, 0.1, 0.6), 0, 2).competitors_cover_alone);
}

TEST(RegionPartition, MandatoryCoverSplitsOnVirtualCostCurve) {
  // Neither bidder covers {A, B, C} alone, so bidder 1 always wins: bundle 1
  // next to 2:{C} (H 2 c1 + 1) against bundle 2 next to 2:{A, B} (H 2 c2 + 1).
  const XorScenario s{{"A", "B", "C"},
                      {bidder(1, {"A", "B"}, {"C"}, 0.5, 0.5), bidder(2, {"C"}, {"A", "B"}, 0.5, 0.5)}};
  const int n = 17;
  const auto g = region_partition(s, 0, n);
  EXPECT_FALSE(g.competitors_cover_alone);
  EXPECT_TRUE(g.violations.empty());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      EXPECT_EQ(g.label(r, c), g.axis[r] <= g.axis[c] ? 1 : 2) << r << "," << c;
    }
  }
  const std::string csv = region_csv(g);
  EXPECT_EQ(csv.substr(0, 8), "c1\\c2,0,");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), n + 1);
}

TEST(RegionPartition, MatchesPerPointOracle) {
  const auto s = gen::xor_scenario(3, 3, 3);
  const int n = 64;
  const auto g = region_partition(s, 0, n);
  std::vector<std::array<double, 2>> h;
  for (const auto& b : s.bidders) {
    h.push_back({dist::virtual_cost(b.distributions[0], b.bids[0]),
                 dist::virtual_cost(b.distributions[1], b.bids[1])});
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      h[0] = {2.0 * g.axis[r], 2.0 * g.axis[c]};
      const auto best = oracle::exhaustive_cover(cover_problem(s, h));
      const int expected = best->choice[0] == Choice::first ? 1 : (best->choice[0] == Choice::second ? 2 : 3);
      ASSERT_EQ(g.label(r, c), expected) << r << "," << c;
    }
  }
}
