#include <benchmark/benchmark.h>

#include "sheafenergy/ball.hpp"

static void BM_SigmaField(benchmark::State& state) {
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto field = sheafenergy::sigma_field(1.0, 1, nodes);
    benchmark::DoNotOptimize(field);
  }
  state.SetComplexityN(nodes);
}
BENCHMARK(BM_SigmaField)->Arg(41)->Arg(101)->Arg(201)->Complexity();

static void BM_CriticalTimes(benchmark::State& state) {
  double q = 0.1;
  for (auto _ : state) {
    auto ct = sheafenergy::critical_times(q, -0.3, 1.0);
    benchmark::DoNotOptimize(ct);
    q = (q < 0.9) ? q + 1e-6 : 0.1;
  }
}
BENCHMARK(BM_CriticalTimes);
