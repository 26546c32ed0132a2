#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "blgc/evolve.hpp"
#include "blgc/hilbert.hpp"
#include "support/instances.hpp"

namespace blgc {
namespace {

TEST(Hilbert, NormExamples) {
  GraphState z = build_graph(GraphSpec::ring(10), Locality{1, 3}, 4);
  EXPECT_EQ(global_l2_norm(z), 0.0);

  GraphState s = build_graph(GraphSpec::ring(100), Locality{1, 3}, 3);
  init_state(s, InitKind::surface, 2);
  EXPECT_NEAR(global_l2_norm(s), 10.0, 1e-12);
  EXPECT_NEAR(sup_norm(s), 1.0, 1e-15);

  GraphState one = build_graph(GraphSpec::edge_list(1, {}), Locality{1, 1}, 2);
  one.set_state(0, std::vector<double>{1.0, 0.0});
  EXPECT_EQ(global_l2_norm(one), 1.0);
  EXPECT_EQ(EmbeddedView(one).norm(), 1.0);
  EXPECT_TRUE(EmbeddedView(one).admissible());
  one.set_state(0, std::vector<double>{1.0, 1e-5});
  EXPECT_FALSE(EmbeddedView(one).admissible());
}

TEST(Hilbert, PythagoreanPair) {
  GraphState g = build_graph(GraphSpec::edge_list(2, {}), Locality{1, 1}, 2);
  g.set_state(0, std::vector<double>{0.6, 0.0});
  g.set_state(1, std::vector<double>{0.0, 0.8});
  EXPECT_NEAR(global_l2_norm(g), 1.0, 1e-16);
}

TEST(Hilbert, NormIsAccurateAtOneMillionNodes) {
  // Every block has norm sqrt(0.5); the exact total is sqrt(M / 2).
  GraphState g = build_graph(GraphSpec::edge_list(1'000'000, {}), Locality{1, 1}, 2);
  const std::vector<double> v{0.5, 0.5};
  for (NodeId i = 0; i < g.node_count(); ++i) g.set_state(i, v);
  EXPECT_NEAR(global_l2_norm_sq(g), 500000.0, 500000.0 * 1e-12);
}

TEST(Hilbert, NormWithReplacedBlock) {
  GraphState g = build_graph(GraphSpec::ring(5), Locality{1, 3}, 2);
  init_state(g, InitKind::uniform_ball, 4);
  const std::vector<double> r{0.6, 0.8};
  GraphState h = g;
  h.set_state(2, r);
  EXPECT_NEAR(global_l2_norm_with_block(g, 2, r), global_l2_norm(h), 1e-15);
}

TEST(Hilbert, SingleSiteIdentityHolds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = testing::random_instance(seed, 80, 6, 1);
    const NodeId i = inst.schedule.at(0, inst.graph.node_count());
    const auto c = check_update_identity(inst.graph, i, inst.params);
    ASSERT_LE(c.identity_residual, kIdentityTolerance) << "seed " << seed;
    ASSERT_EQ(c.status, CertificateStatus::ok);
  }
}

TEST(Hilbert, IdentityOnZeroFunctionalAndSingleNode) {
  GraphState g = build_graph(GraphSpec::ring(12), Locality{1, 3}, 3);
  init_state(g, InitKind::uniform_ball, 8);
  const auto c = check_update_identity(g, 4, UpdateParams{0.5, LocalFunctional::zero()});
  EXPECT_LE(c.identity_residual, 1e-15);
  EXPECT_EQ(c.post_norm, c.pre_norm);

  GraphState one = build_graph(GraphSpec::edge_list(1, {}), Locality{1, 1}, 2);
  one.set_state(0, std::vector<double>{0.6, 0.0});
  const UpdateParams p{1.0, LocalFunctional::saturated_mix(0.0, 0.0, 2.0, 1.0, 2)};
  const auto single = check_update_identity(one, 0, p);
  EXPECT_DOUBLE_EQ(single.post_norm, block_norm(next_state(one, 0, p)));
}

TEST(Hilbert, IdentityOnRingOfFiftySaturatedMix) {
  SplitMix64 rng(50);
  for (int trial = 0; trial < 100; ++trial) {
    GraphState g = build_graph(GraphSpec::ring(50), Locality{1, 3}, 4);
    init_state(g, InitKind::uniform_ball, rng.next());
    const UpdateParams p{rng.uniform(0.1, 2.0),
                         testing::random_functional(rng, FunctionalKind::saturated_mix, 4)};
    const auto c = check_update_identity(g, static_cast<NodeId>(rng.below(50)), p);
    ASSERT_LE(c.identity_residual, kIdentityTolerance);
  }
}

TEST(Hilbert, OperatorBoundSpecialCases) {
  GraphState g = build_graph(GraphSpec::ring(10), Locality{1, 3}, 2);
  // All-zero state: the left side is ||Pi(T_i(0))|| and cannot exceed C0.
  for (auto kind : testing::kAllKinds) {
    SplitMix64 rng(static_cast<int>(kind));
    const UpdateParams p{1.0, testing::random_functional(rng, kind, 2)};
    const double c0 = max_zero_config_offset(g, p);
    const auto c = check_operator_bound(g, 3, p, operator_lipschitz(p), c0);
    EXPECT_EQ(c.pre_norm, 0.0);
    EXPECT_LE(c.post_norm, c0 + 1e-15);
    EXPECT_EQ(c.status, CertificateStatus::ok);
  }
  init_state(g, InitKind::surface, 2);
  const UpdateParams zero{0.5, LocalFunctional::zero()};
  EXPECT_EQ(max_zero_config_offset(g, zero), 0.0);
  const auto c = check_operator_bound(g, 1, zero, operator_lipschitz(zero), 0.0);
  EXPECT_EQ(c.post_norm, c.pre_norm);
  EXPECT_GE(c.bound_slack, 0.0);
}

TEST(Hilbert, OperatorBoundHolds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto inst = testing::random_instance(seed, 80, 6, 1);
    const NodeId i = inst.schedule.at(0, inst.graph.node_count());
    const double l = operator_lipschitz(inst.params);
    const double c0 = max_zero_config_offset(inst.graph, inst.params);
    const auto c = check_operator_bound(inst.graph, i, inst.params, l, c0);
    ASSERT_GE(c.bound_slack, kBoundSlackTolerance) << "seed " << seed;
    ASSERT_EQ(c.status, CertificateStatus::ok);
  }
}

TEST(Hilbert, BoundFailureIsReported) {
  GraphState g = build_graph(GraphSpec::edge_list(2, {{0, 1}}), Locality{1, 2}, 2);
  g.set_state(0, std::vector<double>{0.0, 0.0});
  g.set_state(1, std::vector<double>{0.0, 0.0});
  // A functional with a constant term needs C0 > 0; claiming zero must fail.
  const UpdateParams p{1.0, LocalFunctional::saturated_mix(1.0, 1.0, 1.0, 1.0, 2)};
  const auto c = check_operator_bound(g, 0, p, operator_lipschitz(p), 0.0);
  EXPECT_LT(c.bound_slack, kBoundSlackTolerance);
  EXPECT_EQ(c.status, CertificateStatus::bound_failed);
  const auto ok = check_operator_bound(g, 0, p, operator_lipschitz(p),
                                       max_zero_config_offset(g, p));
  EXPECT_EQ(ok.status, CertificateStatus::ok);
}

TEST(Hilbert, InadmissibleStateIsFlagged) {
  GraphState g = build_graph(GraphSpec::ring(4), Locality{1, 3}, 2);
  g.set_state(1, std::vector<double>{2.0, 0.0});
  const auto c = check_update_identity(g, 0, UpdateParams{0.5, LocalFunctional::zero()});
  EXPECT_EQ(c.status, CertificateStatus::inadmissible);
}

TEST(Hilbert, ZeroConfigOffset) {
  const UpdateParams avg{0.5, LocalFunctional::neighbor_average(1.0)};
  EXPECT_EQ(zero_config_offset(avg, 3, 4), 0.0);
  const UpdateParams mix{0.5, LocalFunctional::saturated_mix(0.0, 0.0, 0.5, 1.0, 4)};
  // f(0) = tanh(0.5) in every coordinate; eta * f has norm 0.5 * 2 * tanh(0.5).
  EXPECT_NEAR(zero_config_offset(mix, 3, 4), std::tanh(0.5), 1e-15);
  const UpdateParams big{1.0, LocalFunctional::saturated_mix(0.0, 0.0, 5.0, 1.0, 4)};
  EXPECT_NEAR(zero_config_offset(big, 3, 4), 1.0, 1e-15);
}

TEST(Hilbert, DeltaBound) {
  GraphState z = build_graph(GraphSpec::ring(5), Locality{1, 3}, 2);
  init_state(z, InitKind::uniform_ball, 1);
  EXPECT_EQ(check_delta_bound(z, 2, UpdateParams{0.5, LocalFunctional::zero()}), 0.0);

  GraphState g = build_graph(GraphSpec::edge_list(2, {{0, 1}}), Locality{1, 2}, 2);
  g.set_state(0, std::vector<double>{1.0, 0.0});
  g.set_state(1, std::vector<double>{-1.0, 0.0});
  EXPECT_EQ(check_delta_bound(g, 0, UpdateParams{1.0, LocalFunctional::neighbor_average(2.0)}),
            2.0);
}

TEST(Hilbert, CompositionStaysInsideSqrtM) {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    auto inst = testing::random_instance(seed, 60, 5, 400);
    const auto traj = evolve(inst.graph, inst.schedule, inst.params, inst.steps);
    ASSERT_LE(global_l2_norm(traj.final_state),
              std::sqrt(static_cast<double>(inst.graph.node_count())) * (1.0 + kNormTolerance));
  }
}

TEST(Hilbert, NormTrackerDriftIsSmall) {
  GraphState g = build_graph(GraphSpec::ring(200), Locality{1, 3}, 4);
  init_state(g, InitKind::uniform_ball, 5);
  NormTracker tracker(g);
  const UpdateParams p{0.7, LocalFunctional::curved_rotation(1.0, 0.4)};
  UpdateWorkspace ws;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    const NodeId i = static_cast<NodeId>(t % 200);
    const double before = block_norm(g.state(i));
    apply_generator(g, i, p, ws);
    const double after = block_norm(g.state(i));
    tracker.replace_block(before * before, after * after);
  }
  EXPECT_LE(tracker.resync(g), 1e-9);
  EXPECT_EQ(tracker.norm_sq(), global_l2_norm_sq(g));
}

TEST(Hilbert, CertificateCsv) {
  GraphState g = build_graph(GraphSpec::ring(4), Locality{1, 3}, 2);
  std::ostringstream out;
  write_certificate_header(out);
  const UpdateParams p{0.5, LocalFunctional::zero()};
  write_certificate_row(out, check_operator_bound(g, 1, p, operator_lipschitz(p), 0.0));
  EXPECT_EQ(out.str(), "node,pre_norm,post_norm,residual,slack,L,C0,status\n1,0,0,0,0,1,0,ok\n");
}

}  // namespace
}  // namespace blgc
