#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "blgc/digest.hpp"
#include "blgc/generators.hpp"
#include "blgc/graph_state.hpp"
#include "blgc/hilbert.hpp"
#include "blgc/schedule.hpp"
#include "blgc/step_metrics.hpp"

namespace blgc {

// Edge mutation applied between steps: before step `step` executes.
struct ScheduledMutation {
  std::uint64_t step = 0;
  EdgeOp op = EdgeOp::add;
  Edge edge;

  bool operator==(const ScheduledMutation&) const = default;
};

struct MonitorSet {
  bool norm_bound = true;     // ||s_i|| <= 1 + 1e-12 for the written node, every step
  bool read_cap = true;       // state_reads <= D, every step
  bool norm_tracking = false;  // incremental ||Psi||^2 vs full recomputation
  std::uint64_t tracking_interval = 10000;
  double drift_tolerance = 1e-9;
};

struct StepRecord {
  StepMetrics metrics;
  double max_norm = 0.0;  // running maximum of node norms seen so far

  bool operator==(const StepRecord&) const = default;
};

struct RunTotals {
  std::uint64_t steps = 0;
  std::uint64_t state_reads = 0;
  std::uint64_t state_writes = 0;
  std::uint64_t flops = 0;
  std::uint64_t max_reads = 0;
  std::uint64_t max_flops = 0;

  bool operator==(const RunTotals&) const = default;
};

struct EvolveOptions {
  std::uint64_t start_step = 0;  // absolute index of the first step (for continuation)
  MonitorSet monitors;
  Instrumentation instrumentation = Instrumentation::count;
  bool keep_records = false;
  std::uint64_t record_stride = 1;
  bool digest_initial = true;
  std::vector<ScheduledMutation> mutations;
  // Called after every step with the node just written.
  std::function<void(const GraphState&, const StepMetrics&)> observer;
};

struct Trajectory {
  std::optional<ReplayDigest> initial_digest;
  Schedule schedule;
  UpdateParams params;
  std::uint64_t start_step = 0;
  std::uint64_t steps = 0;
  std::vector<StepRecord> records;
  RunTotals totals;
  double max_norm = 0.0;
  GraphState final_state;
};

// Incremental driver behind evolve(): owns the state and advances it a
// batch of steps at a time. The initial admissibility scan is O(M) and runs
// once, in the constructor; each step afterwards touches only N_r(pi(t)).
class Evolution {
 public:
  Evolution(GraphState initial, Schedule schedule, UpdateParams params,
            EvolveOptions options = {});

  void advance(std::uint64_t steps);

  std::uint64_t next_step() const noexcept { return next_step_; }
  const GraphState& state() const noexcept { return traj_.final_state; }
  const RunTotals& totals() const noexcept { return traj_.totals; }

  Trajectory finish() &&;

 private:
  void step_once(std::uint64_t t);

  EvolveOptions options_;
  Trajectory traj_;
  std::vector<ScheduledMutation> mutations_;
  std::size_t next_mutation_ = 0;
  std::uint64_t next_step_ = 0;
  UpdateWorkspace ws_;
  std::optional<NormTracker> tracker_;
};

// S_{t+1} = G_{pi(t)}(S_t) for t in [start_step, start_step + steps).
// steps == 0 returns the input unchanged. Monitor failures throw
// MonitorViolation with the step index and node.
Trajectory evolve(GraphState initial, const Schedule& schedule, const UpdateParams& params,
                  std::uint64_t steps, const EvolveOptions& options = {});

ReplayDigest replay_digest(const Trajectory& trajectory);

}  // namespace blgc
