// Serial reference vs OpenMP batch runner, plus the per-run kernels.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "kinex/metrics.hpp"
#include "kinex/rng.hpp"
#include "kinex/simulation.hpp"
#include "kinex/sweep.hpp"

namespace {

std::vector<kinex::SimConfig> batch(std::size_t runs, std::uint64_t t_max) {
  std::vector<kinex::SimConfig> configs;
  for (std::size_t k = 0; k < runs; ++k) {
    kinex::SimConfig c;
    c.model = kinex::ModelSpec::nx(0.25, 0.5);
    c.n_agents = 1000;
    c.t_max = t_max;
    c.seed = kinex::derive_seed(1, k, 0);
    configs.push_back(c);
  }
  return configs;
}

void BM_BatchSerial(benchmark::State& state) {
  const auto configs = batch(static_cast<std::size_t>(state.range(0)), 100'000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kinex::run_batch_serial(configs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100'000);
}
BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BatchOpenMP(benchmark::State& state) {
  const auto configs = batch(static_cast<std::size_t>(state.range(0)), 100'000);
  const int jobs = omp_get_max_threads();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kinex::run_batch(configs, jobs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100'000);
  state.counters["threads"] = jobs;
}
BENCHMARK(BM_BatchOpenMP)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SingleRun(benchmark::State& state) {
  auto configs = batch(1, static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kinex::run_simulation(configs[0]));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SingleRun)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Gini(benchmark::State& state) {
  kinex::Xoshiro256 rng(3);
  std::vector<double> w(static_cast<std::size_t>(state.range(0)));
  for (double& v : w) v = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kinex::gini(w));
  }
}
BENCHMARK(BM_Gini)->Arg(1000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
