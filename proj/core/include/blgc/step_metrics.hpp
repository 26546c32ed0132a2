#pragma once

#include <cstdint>

#include "blgc/graph_state.hpp"

namespace blgc {

// Raw counters accumulated inside one generator application.
struct RawCounters {
  std::uint64_t state_reads = 0;
  std::uint64_t state_writes = 0;
  std::uint64_t flops = 0;
};

// Per-update work W_t: state vectors read, written, and a scalar-operation
// proxy (multiplies, adds, divides, sqrt/tanh each count as one).
struct StepMetrics {
  std::uint64_t step = 0;
  NodeId node = 0;
  std::uint64_t state_reads = 0;
  std::uint64_t state_writes = 0;
  std::uint64_t flop_proxy = 0;

  bool operator==(const StepMetrics&) const = default;
};

inline StepMetrics record_step(std::uint64_t step, NodeId node, const RawCounters& raw) noexcept {
  return StepMetrics{step, node, raw.state_reads, raw.state_writes, raw.flops};
}

}  // namespace blgc
