#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "sitegrid/dataset.hpp"
#include "sitegrid/metrics.hpp"
#include "sitegrid/projection.hpp"
#include "sitegrid/strategies.hpp"
#include "sitegrid/synth.hpp"

namespace {

using namespace sitegrid;

Dataset make_dataset(std::size_t zip_count) {
  SynthOptions options;
  options.zip_count = zip_count;
  options.state_count = 50;
  options.profile = SynthProfile::anti_correlated;
  return synth_dataset(42, options);
}

void BM_SynthDataset(benchmark::State& state) {
  SynthOptions options;
  options.zip_count = static_cast<std::size_t>(state.range(0));
  options.state_count = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synth_dataset(42, options));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthDataset)->Arg(1000)->Arg(10000);

void BM_PerZipMetrics(benchmark::State& state) {
  Dataset dataset = make_dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(per_zip_metrics(dataset));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PerZipMetrics)->Arg(1000)->Arg(10000);

void BM_QuadrantShares(benchmark::State& state) {
  Dataset dataset = make_dataset(10000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrant_shares(dataset));
  }
}
BENCHMARK(BM_QuadrantShares);

void BM_GreedyAlloc(benchmark::State& state) {
  Dataset dataset = make_dataset(10000);
  OrderingSpec ordering{Attr::carbon_per_panel, SortDirection::descending};
  std::int64_t budget = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_alloc(dataset, ordering, budget));
  }
}
BENCHMARK(BM_GreedyAlloc)->Arg(100000)->Arg(1800000);

void BM_StatusQuoAlloc(benchmark::State& state) {
  Dataset dataset = make_dataset(10000);
  std::int64_t budget = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(status_quo_alloc(dataset, budget));
  }
}
BENCHMARK(BM_StatusQuoAlloc)->Arg(100000)->Arg(1800000);

void BM_RoundRobinAlloc(benchmark::State& state) {
  Dataset dataset = make_dataset(10000);
  auto orderings = default_round_robin_orderings();
  std::int64_t budget = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(round_robin_alloc(dataset, orderings, budget));
  }
}
BENCHMARK(BM_RoundRobinAlloc)->Arg(100000)->Arg(1800000);

void BM_Projection(benchmark::State& state) {
  Dataset dataset = make_dataset(static_cast<std::size_t>(state.range(0)));
  ProjectionConfig config;
  config.n_grid = default_n_grid();
  config.strategies = default_strategies();
  bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_projection(dataset, config, parallel));
  }
}
BENCHMARK(BM_Projection)
    ->Args({2000, 0})
    ->Args({2000, 1})
    ->Args({10000, 0})
    ->Args({10000, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
