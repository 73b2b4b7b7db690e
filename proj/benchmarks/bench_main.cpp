#include <benchmark/benchmark.h>

#include "pidyn/chains.hpp"
#include "pidyn/gallery.hpp"
#include "pidyn/periodic.hpp"
#include "pidyn/rng.hpp"
#include "pidyn/stochproc.hpp"

namespace {

using namespace pidyn;

void BM_Philox(benchmark::State& state) {
  const CounterRng rng(42, 7);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rng.symmetric(i++, 0.1));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);

void BM_Eval(benchmark::State& state) {
  const auto f = example2_map(3).map;
  double x = 0.3;
  for (auto _ : state) {
    x = f(x);
    benchmark::DoNotOptimize(x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Eval);

void BM_SimulateExample1(benchmark::State& state) {
  ProcessConfig cfg;
  cfg.seq = example1_seq();
  cfg.delta = 0.19;
  cfg.horizon = static_cast<std::size_t>(state.range(0));
  const Simulator sim(cfg);
  std::vector<double> xs;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    sim.run_into(trial++, xs);
    benchmark::DoNotOptimize(xs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateExample1)->Arg(200)->Arg(2000);

void BM_SimulateBatch(benchmark::State& state) {
  ProcessConfig cfg;
  cfg.seq = MapSequence::constant(remark3_map());
  cfg.x0 = 0.5;
  cfg.delta = 0.05;
  cfg.horizon = 2000;
  for (auto _ : state) {
    auto batch = simulate_batch(cfg, 100, {static_cast<unsigned>(state.range(0))});
    benchmark::DoNotOptimize(batch.data());
  }
}
BENCHMARK(BM_SimulateBatch)->Arg(1)->Arg(4);

void BM_PeriodicSearch(benchmark::State& state) {
  const auto f = truncated_tent();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_periodic_points(f, n).roots.size());
}
BENCHMARK(BM_PeriodicSearch)->Arg(1)->Arg(4)->Arg(16);

void BM_ChainSearch(benchmark::State& state) {
  const auto f = tent();
  const double dp = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_delta_chain(f, dp, 0.1, Ball{0.9, dp / 2}).nodes_reached);
  }
}
BENCHMARK(BM_ChainSearch)->Arg(20)->Arg(200);

void BM_Decompose(benchmark::State& state) {
  const auto g = truncated_tent();
  for (auto _ : state) benchmark::DoNotOptimize(decompose_omega(g, 4, 100000, 1e-3).margin);
}
BENCHMARK(BM_Decompose);

}  // namespace

BENCHMARK_MAIN();
