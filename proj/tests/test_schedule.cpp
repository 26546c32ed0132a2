#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "blgc/errors.hpp"
#include "blgc/schedule.hpp"

namespace blgc {
namespace {

TEST(Schedule, RoundRobin) {
  const auto s = Schedule::round_robin();
  std::vector<NodeId> got;
  for (std::uint64_t t = 0; t <= 6; ++t) got.push_back(schedule_node(s, t, 5));
  EXPECT_EQ(got, (std::vector<NodeId>{0, 1, 2, 3, 4, 0, 1}));
}

TEST(Schedule, ExplicitCycle) {
  const auto s = Schedule::explicit_cycle({3, 1, 4});
  EXPECT_EQ(schedule_node(s, 4, 5), 1u);
  EXPECT_THROW(schedule_node(s, 2, 4), UnknownNode);
  EXPECT_THROW(Schedule::explicit_cycle({}), InvalidArgument);
}

TEST(Schedule, EmptyGraph) {
  EXPECT_THROW(schedule_node(Schedule::round_robin(), 0, 0), EmptyGraph);
  EXPECT_THROW(schedule_node(Schedule::seeded_permutation_sweep(1), 0, 0), EmptyGraph);
}

TEST(Schedule, SeededSweepIsPure) {
  const auto s = Schedule::seeded_permutation_sweep(0xC0FFEE);
  EXPECT_EQ(schedule_node(s, 1'000'000, 37), schedule_node(s, 1'000'000, 37));
  const auto copy = Schedule::seeded_permutation_sweep(0xC0FFEE);
  EXPECT_EQ(schedule_node(copy, 1'000'000, 37), schedule_node(s, 1'000'000, 37));
}

// Property: every sweep of M steps is a permutation of [0, M), and the order
// changes between sweeps and seeds.
TEST(Schedule, SeededSweepVisitsEveryNodeOncePerSweep) {
  for (std::size_t m : {1, 2, 3, 7, 16, 17, 100, 1000, 4097}) {
    const auto s = Schedule::seeded_permutation_sweep(m * 31);
    std::vector<std::vector<NodeId>> sweeps;
    for (std::uint64_t sweep = 0; sweep < 3; ++sweep) {
      std::vector<NodeId> order;
      for (std::uint64_t k = 0; k < m; ++k) order.push_back(s.at(sweep * m + k, m));
      std::vector<NodeId> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      std::vector<NodeId> expect(m);
      std::iota(expect.begin(), expect.end(), 0);
      ASSERT_EQ(sorted, expect) << "m=" << m << " sweep=" << sweep;
      sweeps.push_back(order);
    }
    if (m >= 7) {
      EXPECT_NE(sweeps[0], sweeps[1]);
      std::vector<NodeId> identity(m);
      std::iota(identity.begin(), identity.end(), 0);
      EXPECT_NE(sweeps[0], identity);
    }
  }
}

TEST(Schedule, FrontierBfsOrder) {
  // Path 0-1-2-3 plus an isolated 4, BFS from 2.
  const GraphState g =
      build_graph(GraphSpec::edge_list(5, {{0, 1}, {1, 2}, {2, 3}}), Locality{1, 3}, 1);
  const auto s = Schedule::frontier_bfs(g, 2);
  EXPECT_EQ(std::vector<NodeId>(s.order().begin(), s.order().end()),
            (std::vector<NodeId>{2, 1, 3, 0, 4}));
  EXPECT_EQ(s.at(5, 5), 2u);
  EXPECT_THROW(s.at(0, 4), InvalidArgument);
  EXPECT_THROW(Schedule::frontier_bfs(g, 9), UnknownNode);
}

}  // namespace
}  // namespace blgc
