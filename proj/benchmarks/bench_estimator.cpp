#include <benchmark/benchmark.h>

#include "glaa/estimator.hpp"
#include "glaa/simulation.hpp"
#include "glaa/tuning.hpp"

namespace {

using namespace glaa;

Dataset scenario_data(int which, Index n, std::uint64_t seed) {
  ScenarioSpec spec = scenario_preset(which);
  spec.n = n;
  spec.seed = seed;
  return generate(spec).first;
}

void BM_sample_delta(benchmark::State& state) {
  const Dataset d = center(scenario_data(2, 500, 11));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_delta(d));
  }
}
BENCHMARK(BM_sample_delta);

void BM_fit_scenario1(benchmark::State& state) {
  const Dataset d = center(scenario_data(1, 500, 12));
  const Tensor3 delta = sample_delta(d);
  GlaaConfig config;
  config.ranks = {2, 2, 1};
  config.eta = init_eta_from_quantile(delta, 0.5);
  config.eta_tilde = {0.05, 0.05, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit(delta, config));
  }
}
BENCHMARK(BM_fit_scenario1);

void BM_iterate_step_scenario2(benchmark::State& state) {
  const Dataset d = center(scenario_data(2, 500, 13));
  const Tensor3 delta = sample_delta(d);
  GlaaConfig config;
  config.ranks = {2, 2, 1};
  config.eta = init_eta_from_quantile(delta, 0.5);
  const FactorState init = initialize(delta, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iterate_step(delta, init.gamma, config));
  }
}
BENCHMARK(BM_iterate_step_scenario2);

void BM_generate_scenario1(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(scenario_data(1, 500, 14));
  }
}
BENCHMARK(BM_generate_scenario1);

}  // namespace
