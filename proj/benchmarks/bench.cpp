#include <benchmark/benchmark.h>

#include <cstdint>

#include "multigrowth/analytics.hpp"
#include "multigrowth/engine.hpp"
#include "multigrowth/game.hpp"
#include "multigrowth/tails.hpp"

namespace {

namespace mg = multigrowth;

const mg::GameParams kRef(2.0, 1.0 / 3.0, 0.5);

// Exact group rate: a single lgamma-weighted sum of n + 1 binomial terms.
void shared_rate(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(mg::analytics::shared_rate(kRef, n));
  state.SetComplexityN(n);
}
BENCHMARK(shared_rate)->RangeMultiplier(4)->Range(4, 16384)->Complexity(benchmark::oN);

// Staking optimum via golden-section search over the group rate.
void kelly_optimum(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mg::analytics::kelly_optimal_fraction(0.55, 1.0, n));
}
BENCHMARK(kelly_optimum)->Arg(1)->Arg(4)->Arg(16);

// Synchronous ensemble throughput, reported in agent steps per second.
void simulate_sync(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const int threads = static_cast<int>(state.range(1));
  mg::EnsembleSpec spec;
  spec.n_players = n;
  spec.horizon = 200;
  spec.replicas = 64;
  spec.master_seed = 7;
  spec.generosity = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mg::simulate_sync(kRef, mg::SharingPolicy{1.0, n}, spec, threads));
  }
  state.SetItemsProcessed(state.iterations() * n * spec.horizon * spec.replicas);
}
BENCHMARK(simulate_sync)
    ->ArgsProduct({{1, 4, 16, 64}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

// One-at-a-time pool, aggregate form: one log1p-free add per micro step.
void simulate_async(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  mg::EnsembleSpec spec;
  spec.n_players = n;
  spec.horizon = 200;
  spec.replicas = 64;
  spec.master_seed = 7;
  spec.update_mode = mg::UpdateMode::asynchronous;
  const mg::GameParams g(3.0, 0.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mg::simulate_async(g, n, spec, 1));
  state.SetItemsProcessed(state.iterations() * n * spec.horizon * spec.replicas);
}
BENCHMARK(simulate_async)->Arg(2)->Arg(20)->Unit(benchmark::kMillisecond);

// Exact binomial tail in log space; cost grows with the summed range.
void tail_exact(benchmark::State& state) {
  const std::int64_t t = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mg::tails::growth_probability_exact(kRef, t, mg::tails::TailMode::beat_one));
  }
  state.SetComplexityN(t);
}
BENCHMARK(tail_exact)->RangeMultiplier(4)->Range(100, 25600)->Complexity(benchmark::oN);

// Full win-count decomposition table at one horizon.
void tail_decomposition(benchmark::State& state) {
  const std::int64_t t = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mg::tails::contribution_decomposition(kRef, t));
}
BENCHMARK(tail_decomposition)->Arg(100)->Arg(1000);

}  // namespace
