#include <benchmark/benchmark.h>

#include "resetkit/certify.hpp"
#include "resetkit/runner.hpp"

using namespace resetkit;

namespace {

RunConfig sweep_config() {
  RunConfig c;
  c.algorithm = AlgorithmKind::alliance_sdr;
  c.graph.kind = GraphKind::random_connected;
  c.graph.n = 8;
  c.daemon = "central_random";
  c.init = InitMode::random;
  c.monitors = true;
  return c;
}

void BM_SeedSweep(benchmark::State& state) {
  const auto config = sweep_config();
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto r = run_sweep(config, {0, 64}, parallel);
    benchmark::DoNotOptimize(r.csv.data());
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_SeedSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ReachSerial(benchmark::State& state) {
  const auto g = generate(GraphKind::path, 3, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{4}, 3));
  StateSpace<Unison> space(algo, g, 6, true);
  for (auto _ : state) {
    auto r = reachable_serial(space, 3);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_ReachSerial)->Unit(benchmark::kMillisecond);

void BM_ReachSweep(benchmark::State& state) {
  const auto g = generate(GraphKind::path, 3, 0);
  UnisonSdr algo(unison_algorithm(UnisonParams{4}, 3));
  StateSpace<Unison> space(algo, g, 6, true);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    Bits visited;
    auto r = reachable_sweep(space, 3, 1'000'000'000, parallel, visited, [](auto, const auto&, const auto&) {});
    benchmark::DoNotOptimize(r.reachable);
  }
}
BENCHMARK(BM_ReachSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Diameter(benchmark::State& state) {
  const auto g = generate(GraphKind::random_connected, std::size_t(state.range(0)), 1, 0.002);
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(parallel ? diameter_parallel(g) : diameter(g));
}
BENCHMARK(BM_Diameter)->Args({2000, 0})->Args({2000, 1})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
