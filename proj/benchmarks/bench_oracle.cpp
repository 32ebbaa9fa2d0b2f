#include <benchmark/benchmark.h>

#include "sheafenergy/cellular.hpp"
#include "sheafenergy/rng.hpp"

using namespace sheafenergy;

static void BM_OracleHom(benchmark::State& state) {
  CounterRng rng(19);
  std::vector<Bar> bars;
  for (int i = 0; i < state.range(0); ++i) {
    const double b = rng.uniform(0, 10);
    bars.push_back(Bar(b, b + rng.uniform(0.5, 4)));
  }
  const CellComplexSheaf m = build_cellular(Barcode(bars), -1, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_hom(m, m));
  }
}
BENCHMARK(BM_OracleHom)->Arg(2)->Arg(4)->Arg(8);

static void BM_OracleConvolve(benchmark::State& state) {
  const CellComplexSheaf a = build_cellular(Barcode::single(0, 1), -1, 8);
  const CellComplexSheaf b = build_cellular(Barcode::single(0.25, 2), -1, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_convolve(a, b));
  }
}
BENCHMARK(BM_OracleConvolve);
