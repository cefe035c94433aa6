#include <random>

#include <benchmark/benchmark.h>

#include "lsviae/cost_model.hpp"
#include "lsviae/environments.hpp"
#include "lsviae/experiment.hpp"
#include "lsviae/gram.hpp"

namespace {

using namespace lsviae;

Vector unit_vector(int d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v / v.norm();
}

void BM_GramUpdate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  std::vector<Vector> phis;
  for (int i = 0; i < 64; ++i) phis.push_back(unit_vector(d, rng));
  GramState gram(d, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gram.update(phis[i++ % phis.size()], 0.5));
  }
}
BENCHMARK(BM_GramUpdate)->Arg(8)->Arg(64)->Arg(400);

void BM_GpObserve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  Matrix points(4, 200);
  for (int i = 0; i < 200; ++i) points.col(i) = unit_vector(4, rng);
  for (auto _ : state) {
    state.PauseTiming();
    GpCostModel model(points, 1, Kernel::squared_exponential(0.5), n, 0.1);
    state.ResumeTiming();
    for (int i = 0; i < n; ++i) model.observe(0, i % 200, 0.0);
    benchmark::DoNotOptimize(model.info_gain(0));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GpObserve)->Arg(100)->Arg(400);

// Whole Frozen Lake runs; items are episodes.
void BM_FrozenLakeEpisodes(benchmark::State& state) {
  ExperimentConfig c;
  c.episodes = state.range(0);
  c.lambda = 0.01;
  c.beta_override = 0.5;
  c.cost_width_scale = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).total_violation());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FrozenLakeEpisodes)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
