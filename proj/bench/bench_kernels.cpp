// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <bit>

#include <benchmark/benchmark.h>

#include "depbound/alpha.hpp"
#include "depbound/generators.hpp"
#include "depbound/mc_harness.hpp"
#include "test_support.hpp"

using namespace depbound;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_AlphaEvents(benchmark::State& state) {
  // 16 left cells: 65536 events
  Rng rng(1);
  const auto d = testing::random_distribution(rng, 8, 2, 2);
  AlphaOptions opts;
  opts.exec = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(alpha_dependence(d, {0, 1, 2, 3}, {4, 5, 6, 7}, opts));
}
BENCHMARK(BM_AlphaEvents)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SeparationTable(benchmark::State& state) {
  const auto d = cascade_exact(Graph::chain(10), 0.5, 0.1);
  AlphaOptions opts;
  opts.exec = mode(state);
  for (auto _ : state) {
    const SeparationTable table(d, IndexSet::range(10), opts);
    benchmark::DoNotOptimize(table.separation((1U << 10) - 1));
  }
}
BENCHMARK(BM_SeparationTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EstimateTail(benchmark::State& state) {
  const auto g = Graph::chain(12);
  const MeanSampler sampler = [&g](Rng& rng) {
    return static_cast<double>(std::popcount(cascade_draw(g, 0.5, 0.05, rng))) / 12.0;
  };
  TailOptions opts;
  opts.exec = mode(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_tail(sampler, 0.5, {0.1, 0.2, 0.3, 0.4}, 200000, 7, opts).exceedances);
}
BENCHMARK(BM_EstimateTail)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
