#include <benchmark/benchmark.h>

#include "sheafenergy/hamiltonian.hpp"

using namespace sheafenergy;

static void BM_FlowRK4(benchmark::State& state) {
  HamiltonianSpec spec;
  spec.n = 1;
  spec.support_box.intervals = {{-1e9, 1e9}, {-1e9, 1e9}};
  spec.evaluate = [](double, const std::vector<double>& x) {
    return x[0] * x[0] + x[1] * x[1];
  };
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow(spec, {1.0, 0.0}, 1.0, steps));
  }
}
BENCHMARK(BM_FlowRK4)->Arg(250)->Arg(1000)->Arg(2000);

static void BM_HoferNorm(benchmark::State& state) {
  const HamiltonianSpec spec = vertical_shift_spec(1.0, 1.1, 1.2, 1.0);
  PhaseGrid grid;
  grid.axes = {{-2.45, 2.45, 201}, {-2.45, 2.45, 201}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hofer_norm(spec, grid, 4));
  }
}
BENCHMARK(BM_HoferNorm);
