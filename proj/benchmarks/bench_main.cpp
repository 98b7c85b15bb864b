#include <benchmark/benchmark.h>

#include "bellreg/bell.hpp"
#include "bellreg/sampler.hpp"
#include "bellreg/simulation.hpp"
#include "bellreg/specfun.hpp"

using namespace bellreg;

static void BM_LambertW0(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::lambert_w0(x));
    x = x < 1e4 ? x * 1.37 : 0.01;
  }
}
BENCHMARK(BM_LambertW0);

static void BM_LogBellTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::LogBellTable(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_LogBellTable)->Arg(100)->Arg(1000)->Arg(4096);

static void BM_BellSample(benchmark::State& state) {
  auto rng = make_stream(1, {});
  const bell::BellParam theta(1.0);
  (void)bell::default_sampling_table();  // built once, outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(bell::sample(theta, rng));
}
BENCHMARK(BM_BellSample);

static Dataset bench_data(std::size_t n, std::size_t p) {
  auto rng = make_stream(2, {n, p});
  return sim::simulate_dataset(n, p, sim::default_beta_truth(p), rng);
}

static void BM_LogLikelihood(benchmark::State& state) {
  const auto kind = state.range(1) == 0 ? ModelKind::Bell : ModelKind::Poisson;
  const auto data = bench_data(static_cast<std::size_t>(state.range(0)), 3);
  const auto table = make_table_for(data);
  Eigen::VectorXd beta(3);
  beta << 0.0, -0.5, 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(log_likelihood(kind, data, beta, table));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Args({44, 0})->Args({200, 0})->Args({200, 1})->Args({2000, 0});

static void BM_ChainIterations(benchmark::State& state) {
  const auto data = bench_data(static_cast<std::size_t>(state.range(0)), 3);
  mcmc::McmcConfig cfg;
  cfg.n_iter = 5000;
  cfg.burn_in = 1000;
  cfg.thin = 20;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcmc::run_chain(ModelKind::Bell, GPrior(1, 1, 3), data, cfg, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.n_iter));
}
BENCHMARK(BM_ChainIterations)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
