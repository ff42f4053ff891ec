#include <benchmark/benchmark.h>

#include <random>

#include "optauction/auction.hpp"
#include "optauction/lp.hpp"
#include "optauction/mechanism.hpp"
#include "optauction/ocax.hpp"

namespace {

using namespace optauction;

// Single item, n sellers on costs [5, 15], capacities [400, 500].
Scenario market(int n) {
  Scenario s;
  s.items = {{"unit", 200.0 * n}};
  for (int i = 0; i < n; ++i) s.sellers.push_back({i + 1, {"unit"}, {{5.0, 15.0}, {400.0, 500.0}, dist::IndependentUniform{}}});
  return s;
}

std::vector<SellerBid> bids_for(const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cost(5.0, 15.0), cap(400.0, 500.0);
  std::vector<SellerBid> b;
  for (const auto& sp : s.sellers) b.push_back({sp.id, cost(rng), cap(rng)});
  return b;
}

ocax::XorScenario xor_market(int bidders, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const dist::UnivariateSpec unit{{0.0, 1.0}, dist::UniformShape{}};
  ocax::XorScenario s{{"A", "B", "C", "D"}, {}};
  const std::vector<std::array<std::vector<std::string>, 2>> shapes{
      {{{"A", "B"}, {"C", "D"}}}, {{{"A", "C"}, {"B"}}}, {{{"B", "D"}, {"A"}}}, {{{"C"}, {"D"}}}};
  for (int i = 0; i < bidders; ++i)
    s.bidders.push_back({i + 1, shapes[static_cast<std::size_t>(i) % shapes.size()], {0.0, 1.0}, {unit, unit}, {u(rng), u(rng)}});
  return s;
}

void BM_CoveringLp(benchmark::State& state) {
  const auto s = market(static_cast<int>(state.range(0)));
  const auto bids = bids_for(s, 1);
  const auto lp = auction::winner_determination_lp(s, bids, auction::virtual_costs(s, bids));
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(lp));
}
BENCHMARK(BM_CoveringLp)->Arg(4)->Arg(16)->Arg(64);

void BM_AllocationCurve(benchmark::State& state) {
  const auto s = market(static_cast<int>(state.range(0)));
  const auto bids = bids_for(s, 2);
  for (auto _ : state) benchmark::DoNotOptimize(auction::allocation_curve(s, bids, 0, bids[0].capacity));
}
BENCHMARK(BM_AllocationCurve)->Arg(4)->Arg(16);

void BM_OptimalAuction(benchmark::State& state) {
  const auto s = market(static_cast<int>(state.range(0)));
  const auto bids = bids_for(s, 3);
  const OptimalAuction mech;
  for (auto _ : state) benchmark::DoNotOptimize(mech.run(s, bids));
}
BENCHMARK(BM_OptimalAuction)->Arg(4)->Arg(8);

void BM_OcaxSolve(benchmark::State& state) {
  const auto s = xor_market(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(ocax::solve_ocax(s));
}
BENCHMARK(BM_OcaxSolve)->Arg(4)->Arg(8)->Arg(12);

void BM_OcaxPayment(benchmark::State& state) {
  const auto s = xor_market(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(ocax::ocax_payment(s, 0));
}
BENCHMARK(BM_OcaxPayment)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
