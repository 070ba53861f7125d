#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "aggrlim/aggregation.hpp"
#include "aggrlim/mixing.hpp"
#include "aggrlim/processes.hpp"
#include "aggrlim/quadrature.hpp"
#include "aggrlim/rng.hpp"
#include "aggrlim/samplers.hpp"
#include "aggrlim/theory.hpp"

using namespace aggrlim;

static void BM_PhiloxUniform(benchmark::State& state) {
  RngStream rng(1, 0, 0);
  double acc = 0.0;
  for (auto _ : state) acc += rng.uniform();
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxUniform);

static void BM_StreamConstruction(benchmark::State& state) {
  std::uint64_t copy = 0;
  for (auto _ : state) {
    RngStream rng(1, 0, copy++);
    benchmark::DoNotOptimize(rng.next_u64());
  }
}
BENCHMARK(BM_StreamConstruction);

static void BM_Poisson(benchmark::State& state) {
  const double mean = static_cast<double>(state.range(0)) / 10.0;
  RngStream rng(2, 0, 0);
  std::int64_t acc = 0;
  for (auto _ : state) acc += sample_poisson(rng, mean);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Poisson)->Arg(5)->Arg(50)->Arg(1000)->Arg(1000000);

static void BM_Binomial(benchmark::State& state) {
  const std::int64_t trials = state.range(0);
  RngStream rng(3, 0, 0);
  std::int64_t acc = 0;
  for (auto _ : state) acc += sample_binomial(rng, trials, 0.7);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Binomial)->Arg(10)->Arg(1000)->Arg(1000000);

static void BM_InarPath(benchmark::State& state) {
  RngStream rng(4, 0, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_inar1_path(0.9, {1.0}, n, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InarPath)->Arg(1000)->Arg(100000);

static void BM_ArPath(benchmark::State& state) {
  RngStream rng(5, 0, 0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ar1_path(0.9, {1.0}, n, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ArPath)->Arg(1000)->Arg(100000);

static void BM_PanelReplicate(benchmark::State& state) {
  PanelSpec spec;
  spec.copies = static_cast<std::uint64_t>(state.range(0));
  spec.n = 1000;
  spec.grid = {TimePoint{1, 2}, TimePoint{1, 1}};
  spec.seed = 6;
  std::uint64_t replicate = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_panel_fdd(spec, replicate++, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_PanelReplicate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SampleAlpha(benchmark::State& state) {
  const MixingLaw law = state.range(0) == 0 ? MixingLaw(PsiProfile::constant(), 1.0)
                                            : MixingLaw(PsiProfile::polynomial({0.5, -0.2, 0.7}), 1.0);
  RngStream rng(7, 0, 0);
  double acc = 0.0;
  for (auto _ : state) acc += sample_alpha(law, rng);
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_SampleAlpha)->Arg(0)->Arg(1);

static void BM_GaussKronrodSingular(benchmark::State& state) {
  for (auto _ : state) {
    auto r = integrate_gk([](double x) { return std::pow(x, -0.7) * std::cos(x); }, 0.0, 1.0);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_GaussKronrodSingular);

static void BM_MixedMoment(benchmark::State& state) {
  const MixingLaw law(PsiProfile::polynomial({0.5, -0.2, 0.7}), 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(mixed_moment(law, 5, 1, 1).value);
}
BENCHMARK(BM_MixedMoment);

static void BM_ExactPrelimitCov(benchmark::State& state) {
  const MixingLaw law(PsiProfile::constant(), 1.0);
  const auto m = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_prelimit_cov(Model::inar, m, m, 1.0, law).value);
}
BENCHMARK(BM_ExactPrelimitCov)->Arg(1000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_StableCf(benchmark::State& state) {
  double theta = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stable_cf(theta, 1.0, 2.0));
    theta = theta < 100.0 ? theta * 1.01 : 0.5;
  }
}
BENCHMARK(BM_StableCf);

BENCHMARK_MAIN();
