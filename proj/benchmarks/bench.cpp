#include <benchmark/benchmark.h>

#include "botdetect/detection.hpp"
#include "botdetect/estimation.hpp"
#include "botdetect/identification.hpp"
#include "botdetect/sampler.hpp"
#include "botdetect/star.hpp"

using namespace botdetect;

namespace {

// Args: n, d, average degree.
ModelParams model_of(const benchmark::State& state, std::size_t k = 0) {
  return {static_cast<std::size_t>(state.range(0)), static_cast<int>(state.range(1)),
          Density::average_degree(static_cast<double>(state.range(2))), k};
}

void BM_SampleNull(benchmark::State& state) {
  const ModelParams m = model_of(state);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_null(m, seed++).graph.num_edges());
}

void BM_SampleAlternative(benchmark::State& state) {
  const ModelParams m = model_of(state, 10);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_alternative(m, seed++).graph.num_edges());
}

void BM_AverageDistanceExact(benchmark::State& state) {
  const Graph g = sample_null(model_of(state), 7).graph;
  for (auto _ : state) benchmark::DoNotOptimize(average_graph_distance(g).average);
}

void BM_AverageDistanceSampled(benchmark::State& state) {
  const Graph g = sample_null(model_of(state), 7).graph;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(average_graph_distance_sampled(g, 100000, seed++).average);
}

void BM_MaxStarExact(benchmark::State& state) {
  const Graph g = sample_alternative(model_of(state, 10), 7).graph;
  for (auto _ : state) benchmark::DoNotOptimize(max_isolated_star(g, StarMethod::kExact).value);
}

void BM_MaxStarGreedy(benchmark::State& state) {
  const Graph g = sample_alternative(model_of(state, 10), 7).graph;
  for (auto _ : state) benchmark::DoNotOptimize(max_isolated_star(g, StarMethod::kGreedy).value);
}

void BM_StarProfileExact(benchmark::State& state) {
  const Graph g = sample_alternative(model_of(state, 10), 7).graph;
  for (auto _ : state) benchmark::DoNotOptimize(isolated_star_profile(g, StarMethod::kExact).max_star);
}

void BM_EstimateParameters(benchmark::State& state) {
  const Graph g = sample_null(model_of(state), 7).graph;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_parameters(g).d_hat);
}

void BM_IdentifyBotnet(benchmark::State& state) {
  const auto s = sample_alternative(model_of(state, 10), 7);
  for (auto _ : state) benchmark::DoNotOptimize(identify_botnet(s.graph, s.params.d, 10, s.params.p).suspects.size());
}

void grid(benchmark::internal::Benchmark* b) {
  b->ArgNames({"n", "d", "np"});
  b->Args({10000, 2, 10})->Args({10000, 3, 10})->Args({10000, 7, 10})->Args({10000, 2, 30});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_SampleNull)->Apply(grid);
BENCHMARK(BM_SampleAlternative)->Apply(grid);
BENCHMARK(BM_AverageDistanceExact)->Apply(grid);
BENCHMARK(BM_AverageDistanceSampled)->Apply(grid);
BENCHMARK(BM_MaxStarExact)->Apply(grid);
BENCHMARK(BM_MaxStarGreedy)->Apply(grid);
BENCHMARK(BM_StarProfileExact)->Apply(grid);
BENCHMARK(BM_EstimateParameters)->Apply(grid);
BENCHMARK(BM_IdentifyBotnet)->Apply(grid);
BENCHMARK_MAIN();
