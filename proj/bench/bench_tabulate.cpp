// Serial reference against the OpenMP kernels on the same configurations.
// Outputs are identical by construction; only wall time differs.

#include "gof/bands.hpp"
#include "gof/detection.hpp"
#include "gof/tabulation.hpp"

#include <benchmark/benchmark.h>

namespace {

gof::TabulationConfig config(std::int64_t n, std::int64_t m) {
  gof::TabulationConfig c;
  c.n = n;
  c.M = m;
  c.seed = 1;
  return c;
}

void BM_TabulateSerial(benchmark::State& state) {
  const auto cfg = config(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gof::tabulate_serial(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.n * cfg.M);
}

void BM_TabulateParallel(benchmark::State& state) {
  const auto cfg = config(state.range(0), state.range(1));
  const int threads = static_cast<int>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(gof::tabulate(cfg, threads));
  state.SetItemsProcessed(state.iterations() * cfg.n * cfg.M);
}

void BM_PowerCurve(benchmark::State& state) {
  gof::MixtureConfig mc;
  mc.n = 10000;
  gof::PowerOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(gof::power_curve({mc}, 0.05, 64, gof::published_table(), 3, opts));
}

void BM_Coverage(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(gof::coverage_experiment(100, 500, gof::NullModel::uniform01(),
                                                      gof::BandMethod::cscshm, 0.05, 4, threads));
}

}  // namespace

BENCHMARK(BM_TabulateSerial)->Args({5000, 2000})->Args({50000, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TabulateParallel)
    ->Args({5000, 2000, 1})
    ->Args({5000, 2000, 2})
    ->Args({5000, 2000, 8})
    ->Args({50000, 200, 1})
    ->Args({50000, 200, 8})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_PowerCurve)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Coverage)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
