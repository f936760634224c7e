#include <benchmark/benchmark.h>

#include "slabmc/imbedding.hpp"

using namespace slabmc;

static void BM_Integrate(benchmark::State& state) {
  const double st = static_cast<double>(state.range(0));
  const IIParams p{0.5 * st, 0.5 * st, 0.5, st};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(p, 1.0, 0.1).states.back().ll.tt);
  }
}
BENCHMARK(BM_Integrate)->Arg(1)->Arg(10);
