// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS;
// the "serial" variants pin it to one.

#include <benchmark/benchmark.h>

#include <vector>

#include "radinfo/infometrics.hpp"
#include "radinfo/kernels.hpp"
#include "radinfo/posterior.hpp"

using namespace radinfo;

namespace {

struct GridCase {
  PulseTrainConfig cfg;
  std::vector<cdouble> z;
  std::vector<double> xs, fs;
  std::vector<double> out;

  GridCase(int m, int n, int nx, int nfd) : cfg{m, static_cast<double>(n), 1.0, n} {
    const PriorRect prior = PriorRect::defaults_for(cfg);
    z = synth_received(cfg, 0.2, 0.1 / n, 0.3, 1.0, NoiseSpec{0.1, 3}, 0);
    for (int i = 0; i < nx; ++i) xs.push_back(prior.x_min() + (i + 0.5) * prior.x_width / nx);
    for (int j = 0; j < nfd; ++j) fs.push_back(prior.fd_min() + (j + 0.5) * prior.fd_width / nfd);
    out.resize(xs.size() * fs.size());
  }
};

void set_counters(benchmark::State& state, const GridCase& g) {
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.out.size()));
  state.counters["threads"] = kernels::max_threads();
}

void BM_CorrelateReference(benchmark::State& state) {
  GridCase g(static_cast<int>(state.range(0)), 64, 64, 32);
  for (auto _ : state) {
    kernels::correlate_grid_reference(g.cfg, g.z, g.xs, g.fs, g.out);
    benchmark::DoNotOptimize(g.out.data());
  }
  set_counters(state, g);
}

void BM_CorrelateSerial(benchmark::State& state) {
  const int saved = kernels::max_threads();
  kernels::set_threads(1);
  GridCase g(static_cast<int>(state.range(0)), 64, 64, 32);
  for (auto _ : state) {
    kernels::correlate_grid(g.cfg, g.z, g.xs, g.fs, g.out);
    benchmark::DoNotOptimize(g.out.data());
  }
  set_counters(state, g);
  kernels::set_threads(saved);
}

void BM_CorrelateParallel(benchmark::State& state) {
  GridCase g(static_cast<int>(state.range(0)), 64, 64, 32);
  for (auto _ : state) {
    kernels::correlate_grid(g.cfg, g.z, g.xs, g.fs, g.out);
    benchmark::DoNotOptimize(g.out.data());
  }
  set_counters(state, g);
}

void run_trials_bench(benchmark::State& state, kernels::Execution exec) {
  const PulseTrainConfig cfg{static_cast<int>(state.range(0)), 64e-6, 1e6, 64};
  const PriorRect prior = PriorRect::defaults_for(cfg);
  MonteCarloOptions opts;
  opts.snr_db = 10.0;
  opts.trials = 8;
  opts.execution = exec;
  for (auto _ : state) {
    auto outcomes = run_trials(cfg, prior, opts);
    benchmark::DoNotOptimize(outcomes.data());
  }
  state.SetItemsProcessed(state.iterations() * opts.trials);
  state.counters["threads"] = exec == kernels::Execution::serial ? 1 : kernels::max_threads();
}

void BM_TrialsSerial(benchmark::State& state) { run_trials_bench(state, kernels::Execution::serial); }
void BM_TrialsParallel(benchmark::State& state) { run_trials_bench(state, kernels::Execution::parallel); }

}  // namespace

BENCHMARK(BM_CorrelateReference)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelateSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelateParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
