#include <benchmark/benchmark.h>

#include "slabmc/estimators.hpp"
#include "slabmc/transport.hpp"

using namespace slabmc;

namespace {

Background background(double collisionality) {
  return make_1d0d_background({0.5, collisionality, 0.5}, 1.0);
}

void BM_SimulatePath(benchmark::State& state) {
  const auto kind = static_cast<SimKind>(state.range(0));
  const Background bg = background(static_cast<double>(state.range(1)));
  Rng rng(1);
  ParticlePath path;
  for (auto _ : state) {
    simulate_path(bg, kind, rng, path);
    benchmark::DoNotOptimize(path.events.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatePath)->ArgsProduct({{0, 1, 2}, {1, 10}});

void BM_ScorePath(benchmark::State& state) {
  const Procedure proc = kAllProcedures[static_cast<std::size_t>(state.range(0))];
  const Background bg = background(3.0);
  Rng rng(2);
  const ParticlePath path = simulate_path(bg, proc.sim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(path_score(proc, Quantity::Momentum, path, bg));
  }
}
BENCHMARK(BM_ScorePath)->DenseRange(0, 10);

}  // namespace
