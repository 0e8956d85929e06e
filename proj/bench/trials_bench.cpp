#include <benchmark/benchmark.h>

#include "stomatch/blackbox.hpp"
#include "stomatch/frameworks.hpp"
#include "stomatch/instance.hpp"

using namespace stomatch;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(available_threads()));
}

void BM_RunTrials(benchmark::State& state) {
  const Instance inst = gap_instance(8);
  const auto lp = solve_benchmark(inst, true);
  const UniformRandomBlackBox box;
  const auto table = schedule_table(inst, box.profile(), Framework::attn1);
  RunOptions opts;
  opts.inner_trials = 500;
  opts.cache = std::make_shared<StarEstimateCache>(1, opts.inner_trials);
  const auto trials = static_cast<std::size_t>(state.range(1));
  run_trials(inst, lp, box, Framework::attn1, table, trials, 0, opts, Execution::serial);  // warm the cache
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trials(inst, lp, box, Framework::attn1, table, trials, 7, opts, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_RunTrials)->ArgsProduct({{0, 1}, {2000}})->Unit(benchmark::kMillisecond);

void BM_ProbeEstimate(benchmark::State& state) {
  StarProblem star;
  star.patience = 3;
  for (std::size_t i = 0; i < 6; ++i) star.edges.push_back({i, 0.3, 0.45});
  const UniformRandomBlackBox box;
  const auto trials = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_probe_probs(box, star, trials, 3, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  label(state);
}
BENCHMARK(BM_ProbeEstimate)->ArgsProduct({{0, 1}, {100000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
