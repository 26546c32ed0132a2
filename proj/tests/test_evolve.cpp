#include <gtest/gtest.h>

#include <cmath>

#include "blgc/errors.hpp"
#include "blgc/evolve.hpp"
#include "blgc/hilbert.hpp"
#include "support/instances.hpp"

namespace blgc {
namespace {

GraphState ring_of_four() {
  GraphState g = build_graph(GraphSpec::ring(4), Locality{1, 3}, 2);
  for (NodeId i = 1; i < 4; ++i) g.set_state(i, std::vector<double>{1.0, 0.0});
  return g;
}

const UpdateParams kRingParams{0.5, LocalFunctional::neighbor_average(1.0)};

TEST(Evolve, ZeroStepsIsIdentity) {
  auto inst = testing::random_instance(5, 30, 3, 0);
  const GraphState before = inst.graph;
  const auto traj = evolve(inst.graph, inst.schedule, inst.params, 0);
  EXPECT_TRUE(traj.final_state == before);
  EXPECT_EQ(traj.totals.steps, 0u);
  EXPECT_EQ(replay_digest(traj), *traj.initial_digest);
}

TEST(Evolve, ZeroFunctionalIsIdentity) {
  GraphState g = build_graph(GraphSpec::torus(5, 5), Locality{1, 5}, 3);
  init_state(g, InitKind::uniform_ball, 6);
  const auto traj = evolve(g, Schedule::seeded_permutation_sweep(2),
                           UpdateParams{0.9, LocalFunctional::zero()}, 500);
  EXPECT_TRUE(traj.final_state == g);
}

TEST(Evolve, RingOfFourOneStep) {
  const auto traj = evolve(ring_of_four(), Schedule::round_robin(), kRingParams, 1);
  EXPECT_DOUBLE_EQ(traj.final_state.state(0)[0], 1.0 / 3.0);
  for (NodeId i = 1; i < 4; ++i) EXPECT_EQ(traj.final_state.state(i)[0], 1.0);
}

TEST(Evolve, RingOfFourFourSteps) {
  // Hand iteration in exact rationals (x components; y stays 0):
  //  s0 = 0 + (2/3)/2 = 1/3
  //  s1 = 1 + (7/9 - 1)/2 = 8/9
  //  s2 = 1 + (26/27 - 1)/2 = 53/54
  //  s3 = 1 + (125/162 - 1)/2 = 287/324
  const auto traj = evolve(ring_of_four(), Schedule::round_robin(), kRingParams, 4);
  const auto& g = traj.final_state;
  EXPECT_NEAR(g.state(0)[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.state(1)[0], 8.0 / 9.0, 1e-15);
  EXPECT_NEAR(g.state(2)[0], 53.0 / 54.0, 1e-15);
  EXPECT_NEAR(g.state(3)[0], 287.0 / 324.0, 1e-15);
  for (NodeId i = 0; i < 4; ++i) EXPECT_EQ(g.state(i)[1], 0.0);
}

TEST(Evolve, RecordsMetricsWithStride) {
  EvolveOptions opts;
  opts.keep_records = true;
  opts.record_stride = 3;
  const auto traj = evolve(ring_of_four(), Schedule::round_robin(), kRingParams, 10, opts);
  ASSERT_EQ(traj.records.size(), 4u);  // t = 0, 3, 6, 9
  EXPECT_EQ(traj.records[1].metrics.step, 3u);
  EXPECT_EQ(traj.records[1].metrics.node, 3u);
  EXPECT_EQ(traj.totals.state_reads, 30u);
  EXPECT_EQ(traj.totals.state_writes, 10u);
}

TEST(Evolve, InadmissibleInitialStateTripsMonitor) {
  GraphState g = build_graph(GraphSpec::ring(6), Locality{1, 3}, 2);
  g.set_state(4, std::vector<double>{1.5, 0.0});
  try {
    evolve(g, Schedule::round_robin(), kRingParams, 3);
    FAIL() << "expected MonitorViolation";
  } catch (const MonitorViolation& e) {
    EXPECT_EQ(e.node(), 4u);
    EXPECT_EQ(e.step(), 0u);
  }
}

TEST(Evolve, MutationsApplyBetweenSteps) {
  GraphState g = build_graph(GraphSpec::ring(8), Locality{1, 4}, 2);
  init_state(g, InitKind::uniform_ball, 1);
  EvolveOptions opts;
  opts.mutations = {{3, EdgeOp::add, Edge{0, 4}}, {6, EdgeOp::remove, Edge{0, 4}}};
  // Step through by hand: steps 0..2 on the ring, 3..5 with the chord, 6..7 without.
  GraphState manual = g;
  UpdateWorkspace ws;
  for (std::uint64_t t = 0; t < 8; ++t) {
    if (t == 3) manual.add_edge(0, 4);
    if (t == 6) manual.remove_edge(0, 4);
    apply_generator(manual, static_cast<NodeId>(t % 8), kRingParams, ws);
  }
  const auto traj = evolve(g, Schedule::round_robin(), kRingParams, 8, opts);
  EXPECT_TRUE(traj.final_state == manual);
}

TEST(Evolve, MutationBeyondCapAborts) {
  GraphState g = build_graph(GraphSpec::ring(8), Locality{1, 3}, 2);
  EvolveOptions opts;
  opts.mutations = {{2, EdgeOp::add, Edge{0, 4}}};
  EXPECT_THROW(evolve(g, Schedule::round_robin(), kRingParams, 5, opts), CapViolation);
}

// Property: identical inputs give identical digests, for every schedule kind.
TEST(Evolve, DeterministicAcrossRuns) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testing::random_instance(seed, 50, 4, 300);
    const auto a = evolve(inst.graph, inst.schedule, inst.params, inst.steps);
    const auto b = evolve(inst.graph, inst.schedule, inst.params, inst.steps);
    ASSERT_EQ(replay_digest(a), replay_digest(b));
    ASSERT_EQ(replay_digest(a), replay_digest(a));
  }
}

TEST(Evolve, DigestsSeparateDifferentInitialStates) {
  GraphState a = build_graph(GraphSpec::ring(64), Locality{1, 3}, 4);
  GraphState b = a;
  init_state(a, InitKind::uniform_ball, 1);
  init_state(b, InitKind::uniform_ball, 2);
  const auto ta = evolve(a, Schedule::round_robin(), kRingParams, 500);
  const auto tb = evolve(b, Schedule::round_robin(), kRingParams, 500);
  EXPECT_NE(replay_digest(ta), replay_digest(tb));
  // Digesting again without re-running is pure.
  EXPECT_EQ(replay_digest(ta), digest_state(ta.final_state));
}

// Property: g(a + b) = continuation of g(a) for b more steps.
TEST(Evolve, CompositionSplitsAnywhere) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    auto inst = testing::random_instance(seed, 50, 4, 200);
    SplitMix64 rng(seed);
    const std::uint64_t a = rng.below(inst.steps + 1);
    const auto whole = evolve(inst.graph, inst.schedule, inst.params, inst.steps);
    const auto first = evolve(inst.graph, inst.schedule, inst.params, a);
    EvolveOptions cont;
    cont.start_step = a;
    const auto second =
        evolve(first.final_state, inst.schedule, inst.params, inst.steps - a, cont);
    ASSERT_TRUE(second.final_state == whole.final_state) << "seed " << seed;
  }
}

TEST(Evolve, InstrumentationDoesNotChangeResults) {
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    auto inst = testing::random_instance(seed, 50, 4, 300);
    EvolveOptions off;
    off.instrumentation = Instrumentation::off;
    EvolveOptions traced;
    traced.instrumentation = Instrumentation::trace;
    traced.keep_records = true;
    const auto a = evolve(inst.graph, inst.schedule, inst.params, inst.steps, off);
    const auto b = evolve(inst.graph, inst.schedule, inst.params, inst.steps, traced);
    ASSERT_EQ(replay_digest(a), replay_digest(b));
    EXPECT_EQ(a.totals.flops, 0u);
  }
}

TEST(Evolve, NormTrackingStaysWithinDrift) {
  GraphState g = build_graph(GraphSpec::ring(2000), Locality{1, 3}, 4);
  init_state(g, InitKind::uniform_ball, 12);
  EvolveOptions opts;
  opts.monitors.norm_tracking = true;
  opts.monitors.tracking_interval = 1000;
  const auto traj = evolve(g, Schedule::seeded_permutation_sweep(4),
                           UpdateParams{0.8, LocalFunctional::curved_rotation(1.3, 0.7)}, 50000,
                           opts);
  EXPECT_LE(traj.max_norm, 1.0 + kNormTolerance);
  EXPECT_LE(global_l2_norm(traj.final_state), std::sqrt(2000.0));
}

TEST(Evolve, RunningMaxNormIsAnUpperBound) {
  auto inst = testing::random_instance(17, 40, 3, 0);
  EvolveOptions opts;
  opts.keep_records = true;
  opts.observer = [](const GraphState& g, const StepMetrics&) {
    ASSERT_LE(sup_norm(g), 1.0 + kNormTolerance);
  };
  const auto traj = evolve(inst.graph, inst.schedule, inst.params, 200, opts);
  for (const auto& rec : traj.records) EXPECT_LE(rec.max_norm, 1.0 + kNormTolerance);
  EXPECT_GE(traj.max_norm, sup_norm(traj.final_state));
}

}  // namespace
}  // namespace blgc
