#include <gtest/gtest.h>

#include "blgc/evolve.hpp"
#include "oracle/reference_evolver.hpp"
#include "support/instances.hpp"

namespace blgc {
namespace {

TEST(Oracle, RoundTripsThroughGraphState) {
  auto inst = testing::random_instance(3, 50, 4, 0);
  EXPECT_TRUE(oracle::to_graph(oracle::from_graph(inst.graph)) == inst.graph);
}

TEST(Oracle, ZeroStepsLeavesInputUnchanged) {
  auto inst = testing::random_instance(8, 50, 4, 0);
  const auto before = oracle::from_graph(inst.graph);
  const auto after = oracle::oracle_evolve(before, inst.schedule, inst.params, 0);
  EXPECT_TRUE(oracle::to_graph(after) == inst.graph);
}

TEST(Oracle, BallsMatchEngine) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto inst = testing::random_instance(seed, 80, 2, 0);
    const auto os = oracle::from_graph(inst.graph);
    for (NodeId i = 0; i < inst.graph.node_count(); ++i) {
      const auto ball = oracle::bfs_ball(os, i);
      const auto eng = neighborhood(inst.graph, i);
      ASSERT_EQ(std::vector<NodeId>(ball.begin(), ball.end()),
                std::vector<NodeId>(eng.begin(), eng.end()));
    }
  }
}

TEST(Oracle, RingOfFourMatchesHandValue) {
  GraphState g = build_graph(GraphSpec::ring(4), Locality{1, 3}, 2);
  for (NodeId i = 1; i < 4; ++i) g.set_state(i, std::vector<double>{1.0, 0.0});
  const UpdateParams p{0.5, LocalFunctional::neighbor_average(1.0)};
  const auto o = oracle::oracle_evolve(oracle::from_graph(g), Schedule::round_robin(), p, 1);
  EXPECT_DOUBLE_EQ(o.states.at(0)[0], 1.0 / 3.0);
  const auto e = evolve(g, Schedule::round_robin(), p, 1);
  EXPECT_TRUE(oracle::to_graph(o) == e.final_state);
}

// Differential property: engine and reference agree bit for bit.
TEST(Oracle, EngineMatchesReferenceBitForBit) {
  for (std::uint64_t seed = 1000; seed < 1300; ++seed) {
    auto inst = testing::random_instance(seed, 100, 6, 50);
    const auto e = evolve(inst.graph, inst.schedule, inst.params, inst.steps);
    const auto o = oracle::oracle_evolve(oracle::from_graph(inst.graph), inst.schedule,
                                         inst.params, inst.steps);
    ASSERT_TRUE(oracle::to_graph(o) == e.final_state) << "seed " << seed;
  }
}

TEST(Oracle, ContinuationMatchesReference) {
  auto inst = testing::random_instance(77, 40, 3, 50);
  EvolveOptions opts;
  opts.start_step = 1234;
  const auto e = evolve(inst.graph, inst.schedule, inst.params, inst.steps, opts);
  const auto o = oracle::oracle_evolve(oracle::from_graph(inst.graph), inst.schedule,
                                       inst.params, inst.steps, 1234);
  EXPECT_TRUE(oracle::to_graph(o) == e.final_state);
}

}  // namespace
}  // namespace blgc
