#include <benchmark/benchmark.h>

#include <cstdint>
#include <optional>

#include "storeopt/io.hpp"
#include "storeopt/oracle.hpp"
#include "storeopt/scenario.hpp"
#include "storeopt/solver.hpp"
#include "storeopt/transforms.hpp"

namespace {

using namespace storeopt;

CoreProblem instance(std::size_t n) {
  oracle::Rng rng(0x5EEDu + n);
  return oracle::random_feasible_instance(rng, n,
                                          oracle::PriceStyle::kDistinctNonzero);
}

void BM_Solve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CoreProblem p = instance(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(p));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Solve)
    ->Arg(100)->Arg(500)->Arg(1000)->Arg(2500)->Arg(5000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNSquared);

void BM_SolveCounted(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CoreProblem p = instance(n);
  OpCounts counts;
  for (auto _ : state) {
    const CountedSolution s = solve_counted(p);
    counts = s.counts;
    benchmark::DoNotOptimize(s);
  }
  state.counters["flops"] = static_cast<double>(counts.flops);
  state.counters["comparisons"] = static_cast<double>(counts.comparisons);
}
BENCHMARK(BM_SolveCounted)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_PriceOrder(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CoreProblem p = instance(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(price_order(p.prices()));
  }
}
BENCHMARK(BM_PriceOrder)->Arg(8760);

void BM_YearDecaySolve(benchmark::State& state) {
  const io::SyntheticData data =
      io::generate_synthetic(8760, 1, io::DemandShape::kSeasonal,
                             io::PriceShape::kDiurnalWithNegatives);
  StorageScenario s;
  s.demand = data.demand;
  s.prices = data.prices;
  s.charge_cap = 9.0;
  s.capacity = 14.71;
  s.retention = 0.9962;
  for (auto _ : state) {
    benchmark::DoNotOptimize(io::run_solve(s));
  }
}
BENCHMARK(BM_YearDecaySolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
