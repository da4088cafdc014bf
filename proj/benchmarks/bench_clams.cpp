#include <benchmark/benchmark.h>

#include <vector>

#include "clams/ambiguity.hpp"
#include "clams/datagen.hpp"
#include "clams/features.hpp"
#include "clams/gmm.hpp"
#include "clams/separability.hpp"

namespace {

clams::Scatterplot scene(int k, int per_component, std::uint64_t seed) {
  clams::SceneSpec spec;
  spec.k = k;
  spec.count_min = per_component;
  spec.count_max = per_component;
  spec.seed = seed;
  return clams::generate_scene(spec).plot;
}

const clams::SeparabilityModel& model() {
  static const clams::SeparabilityModel m = [] {
    clams::TrainingSetOptions opts;
    opts.mc_samples = 500;
    return clams::train(clams::generate_training_set(1000, clams::PairRanges{}, opts, 11), clams::TrainConfig{});
  }();
  return m;
}

void BM_FitGmm(benchmark::State& state) {
  const clams::Scatterplot plot = scene(4, static_cast<int>(state.range(0)) / 4, 1);
  clams::GmmFitConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(clams::fit_gmm(plot, 4, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plot.size()));
}
BENCHMARK(BM_FitGmm)->Arg(400)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const clams::Scatterplot plot = scene(5, static_cast<int>(state.range(0)) / 5, 2);
  clams::GmmFitConfig cfg;
  cfg.k_max = 10;
  cfg.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(clams::decompose(plot, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Decompose)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_PairFeaturesAndPredict(benchmark::State& state) {
  const auto a = clams::GaussianComponent::from_axes({0, 0}, 2, 1, 0.4, 100, 0.5);
  const auto b = clams::GaussianComponent::from_axes({3, 1}, 1.5, 0.7, 1.1, 80, 0.5);
  const clams::SeparabilityModel& m = model();
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(clams::pair_features(a, b)));
}
BENCHMARK(BM_PairFeaturesAndPredict);

void BM_ClamsScore(benchmark::State& state) {
  const clams::Scatterplot plot = scene(static_cast<int>(state.range(0)), 200, 3);
  const clams::SeparabilityModel& m = model();
  clams::GmmFitConfig cfg;
  cfg.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(clams::clams_score(plot, m, cfg));
}
BENCHMARK(BM_ClamsScore)->Arg(2)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
