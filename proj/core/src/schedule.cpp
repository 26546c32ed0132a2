#include "blgc/schedule.hpp"

#include <bit>
#include <string>

#include "blgc/errors.hpp"
#include "blgc/rng.hpp"

namespace blgc {

std::string_view to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::round_robin:
      return "round_robin";
    case ScheduleKind::explicit_cycle:
      return "explicit_cycle";
    case ScheduleKind::seeded_permutation_sweep:
      return "seeded_permutation_sweep";
    case ScheduleKind::frontier_bfs:
      return "frontier_bfs";
  }
  return "unknown";
}

Schedule Schedule::round_robin() { return Schedule{}; }

Schedule Schedule::explicit_cycle(std::vector<NodeId> cycle) {
  if (cycle.empty()) throw InvalidArgument("explicit_cycle needs at least one node");
  Schedule s;
  s.kind_ = ScheduleKind::explicit_cycle;
  s.order_ = std::move(cycle);
  return s;
}

Schedule Schedule::seeded_permutation_sweep(std::uint64_t seed) {
  Schedule s;
  s.kind_ = ScheduleKind::seeded_permutation_sweep;
  s.seed_ = seed;
  return s;
}

Schedule Schedule::frontier_bfs(const GraphState& g, NodeId start) {
  if (g.node_count() == 0) throw EmptyGraph();
  if (!g.contains(start)) throw UnknownNode(start);
  Schedule s;
  s.kind_ = ScheduleKind::frontier_bfs;
  s.start_ = start;
  std::vector<bool> seen(g.node_count(), false);
  auto bfs_from = [&](NodeId root) {
    std::size_t head = s.order_.size();
    s.order_.push_back(root);
    seen[root] = true;
    while (head < s.order_.size()) {
      for (NodeId nb : g.adjacent(s.order_[head++])) {
        if (!seen[nb]) {
          seen[nb] = true;
          s.order_.push_back(nb);
        }
      }
    }
  };
  bfs_from(start);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!seen[i]) bfs_from(static_cast<NodeId>(i));
  }
  return s;
}

NodeId Schedule::at(std::uint64_t t, std::size_t node_count) const {
  if (node_count == 0) throw EmptyGraph();
  switch (kind_) {
    case ScheduleKind::round_robin:
      return static_cast<NodeId>(t % node_count);
    case ScheduleKind::explicit_cycle:
    case ScheduleKind::frontier_bfs: {
      if (kind_ == ScheduleKind::frontier_bfs && order_.size() != node_count) {
        throw InvalidArgument("frontier_bfs schedule was built for " +
                              std::to_string(order_.size()) + " nodes, not " +
                              std::to_string(node_count));
      }
      const NodeId node = order_[t % order_.size()];
      if (node >= node_count) throw UnknownNode(node);
      return node;
    }
    case ScheduleKind::seeded_permutation_sweep:
      return static_cast<NodeId>(keyed_permutation(seed_, t / node_count, t % node_count,
                                                   node_count));
  }
  throw InvalidArgument("unknown schedule kind");
}

std::uint64_t keyed_permutation(std::uint64_t seed, std::uint64_t sweep, std::uint64_t pos,
                                std::uint64_t n) {
  if (n <= 1) return 0;
  const unsigned bits = static_cast<unsigned>(std::bit_width(n - 1));
  const unsigned half = (bits + 1) / 2;
  const std::uint64_t mask = (std::uint64_t{1} << half) - 1;

  SplitMix64 keygen(derive_seed(seed, sweep));
  std::uint64_t keys[4];
  for (auto& k : keys) k = keygen.next();

  std::uint64_t x = pos;
  do {
    std::uint64_t left = x >> half;
    std::uint64_t right = x & mask;
    for (std::uint64_t key : keys) {
      const std::uint64_t next_left = right;
      right = left ^ (mix64(right ^ key) & mask);
      left = next_left;
    }
    x = (left << half) | right;
  } while (x >= n);
  return x;
}

}  // namespace blgc
