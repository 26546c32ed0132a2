#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "blgc/graph_state.hpp"

namespace blgc {

enum class ScheduleKind { round_robin, explicit_cycle, seeded_permutation_sweep, frontier_bfs };

std::string_view to_string(ScheduleKind kind) noexcept;

// Deterministic index schedule pi : t -> node. pi(t) depends only on the
// schedule's parameters, t and the node count, never on the state.
class Schedule {
 public:
  static Schedule round_robin();
  static Schedule explicit_cycle(std::vector<NodeId> cycle);
  // Sweep s = t / M visits every node once, in a permutation keyed by
  // (seed, s). Each evaluation is O(1): a 4-round Feistel network over the
  // next even power of two with cycle-walking into [0, M).
  static Schedule seeded_permutation_sweep(std::uint64_t seed);
  // BFS order of `g` from `start` (neighbors ascending; unreached components
  // continue from the smallest unvisited id), fixed when the schedule is built.
  static Schedule frontier_bfs(const GraphState& g, NodeId start);

  ScheduleKind kind() const noexcept { return kind_; }
  std::span<const NodeId> order() const noexcept { return order_; }
  std::uint64_t seed() const noexcept { return seed_; }
  NodeId start() const noexcept { return start_; }

  // Throws EmptyGraph when node_count == 0 and UnknownNode when an explicit
  // entry is out of range.
  NodeId at(std::uint64_t t, std::size_t node_count) const;

  bool operator==(const Schedule&) const = default;

 private:
  ScheduleKind kind_ = ScheduleKind::round_robin;
  std::vector<NodeId> order_;
  std::uint64_t seed_ = 0;
  NodeId start_ = 0;
};

inline NodeId schedule_node(const Schedule& sched, std::uint64_t t, std::size_t node_count) {
  return sched.at(t, node_count);
}

// Position `pos` of the seed/sweep-keyed permutation of [0, n).
std::uint64_t keyed_permutation(std::uint64_t seed, std::uint64_t sweep, std::uint64_t pos,
                                std::uint64_t n);

}  // namespace blgc
