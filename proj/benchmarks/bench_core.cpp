#include <benchmark/benchmark.h>

#include <cmath>

#include <torusperc/torusperc.hpp>

using namespace torusperc;

static void BM_SampleLongEdges(benchmark::State& state) {
  const TorusParams params(static_cast<int>(state.range(0)), 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_long_edges(params, {seed++, 0}));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_SampleLongEdges)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_Step(benchmark::State& state) {
  const Graph g = build_graph(TorusParams(static_cast<int>(state.range(0)), 1.0), {1, 0});
  ActivationState s = init_state(g, {2, 0.1, 1.0, 1}, {1, 1});
  for (auto _ : state) {
    s = step(g, s, 2);
    benchmark::DoNotOptimize(s.active_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMicrosecond);

static void BM_BfsEccentricity(benchmark::State& state) {
  const Graph g = build_graph(TorusParams(static_cast<int>(state.range(0)), 1.0), {1, 0});
  VertexId v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bfs_eccentricity(g, v));
    v = (v + 7919) % g.vertex_count();
  }
}
BENCHMARK(BM_BfsEccentricity)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMicrosecond);

static void BM_ExactDegreeLaw(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(exact_long_degree_distribution(static_cast<int>(state.range(0)), 1.0));
}
BENCHMARK(BM_ExactDegreeLaw)->Arg(128)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_FbarGeneric(benchmark::State& state) {
  const double lambda = static_cast<double>(state.range(0));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fbar_generic(x, lambda, 3));
    x = std::fmod(x + 0.0137, 1.0);
  }
}
BENCHMARK(BM_FbarGeneric)->Arg(1)->Arg(10)->Arg(50);

static void BM_Pc(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  double lambda = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_c(lambda, k));
    lambda = lambda > 50.0 ? 0.05 : lambda * 1.1;
  }
}
BENCHMARK(BM_Pc)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

static void BM_MfChainRun(benchmark::State& state) {
  const auto model = MeanFieldModel::poisson(2.0, 2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mf_chain_run(static_cast<int>(state.range(0)), {2, 0.2, 1.0, 1000}, model, {seed++, 0}));
  }
}
BENCHMARK(BM_MfChainRun)->Arg(300)->Arg(3000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
