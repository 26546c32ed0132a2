#include <benchmark/benchmark.h>

#include "blgc/evolve.hpp"
#include "blgc/generators.hpp"
#include "blgc/schedule.hpp"

namespace {

using namespace blgc;

UpdateParams params_for(int kind) {
  switch (kind) {
    case 0:
      return {0.5, LocalFunctional::zero()};
    case 1:
      return {0.5, LocalFunctional::neighbor_average(1.0)};
    case 2:
      return {0.5, LocalFunctional::saturated_mix(1.5, -0.8, 0.3, 1.2, 8)};
    default:
      return {0.5, LocalFunctional::curved_rotation(1.6, 0.9)};
  }
}

GraphState ring(std::size_t m) {
  GraphState g = build_graph(GraphSpec::ring(m), Locality{1, 3}, 8);
  init_state(g, InitKind::uniform_ball, 1);
  return g;
}

// Per-update cost should not move with M.
void BM_ApplyGenerator(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const UpdateParams p = params_for(static_cast<int>(state.range(1)));
  GraphState g = ring(m);
  const Schedule sched = Schedule::seeded_permutation_sweep(3);
  UpdateWorkspace ws;
  std::uint64_t t = 0;
  for (auto _ : state) {
    const auto metrics = apply_generator(g, sched.at(t++, m), p, ws, Instrumentation::off);
    benchmark::DoNotOptimize(metrics);
  }
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(std::string(to_string(p.functional.kind)));
}
BENCHMARK(BM_ApplyGenerator)
    ->ArgsProduct({{1'000, 10'000, 100'000, 1'000'000}, {0, 1, 2, 3}});

void BM_Neighborhood(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const GraphState g =
      build_graph(GraphSpec::random_regular(m, 3, 5), Locality{2, 10}, 4);
  NodeId i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(neighborhood(g, i).data());
    i = static_cast<NodeId>((i + 7919) % m);
  }
}
BENCHMARK(BM_Neighborhood)->Arg(1'000)->Arg(100'000)->Arg(1'000'000);

void BM_EdgeMutation(benchmark::State& state) {
  GraphState g = build_graph(GraphSpec::ring(10'000), Locality{2, 7}, 4);
  for (auto _ : state) {
    g.remove_edge(100, 101);
    g.add_edge(100, 101);
  }
  state.SetItemsProcessed(2 * state.iterations());
}
BENCHMARK(BM_EdgeMutation);

void BM_Evolve(benchmark::State& state) {
  const GraphState g = ring(10'000);
  const UpdateParams p = params_for(2);
  EvolveOptions opts;
  opts.digest_initial = false;
  for (auto _ : state) {
    auto traj = evolve(g, Schedule::round_robin(), p, 10'000, opts);
    benchmark::DoNotOptimize(traj.max_norm);
  }
  state.SetItemsProcessed(10'000 * state.iterations());
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
