#include <benchmark/benchmark.h>

#include "sheafenergy/interleaving.hpp"
#include "sheafenergy/rng.hpp"

using namespace sheafenergy;

static Barcode random_barcode(CounterRng& rng, int bars) {
  std::vector<Bar> out;
  for (int i = 0; i < bars; ++i) {
    const double birth = rng.uniform(0, 4);
    out.push_back(Bar(birth, birth + rng.uniform(0.25, 3)));
  }
  return Barcode(out);
}

static void BM_InterleavingDistance(benchmark::State& state) {
  CounterRng rng(17);
  const int bars = static_cast<int>(state.range(0));
  const Barcode f = random_barcode(rng, bars);
  const Barcode g = random_barcode(rng, bars);
  for (auto _ : state) {
    benchmark::DoNotOptimize(interleaving_distance(f, g));
  }
}
BENCHMARK(BM_InterleavingDistance)->Arg(2)->Arg(4)->Arg(6);

static void BM_IsInterleaved(benchmark::State& state) {
  CounterRng rng(18);
  const Barcode f = random_barcode(rng, 5);
  const Barcode g = random_barcode(rng, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(is_interleaved(f, g, 0.5, 0.5));
  }
}
BENCHMARK(BM_IsInterleaved);
