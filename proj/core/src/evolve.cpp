#include "blgc/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blgc/errors.hpp"
#include "blgc/hilbert.hpp"

namespace blgc {

namespace {

double squared(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

}  // namespace

Evolution::Evolution(GraphState initial, Schedule schedule, UpdateParams params,
                     EvolveOptions options)
    : options_(std::move(options)),
      traj_{std::nullopt, std::move(schedule), params, options_.start_step, 0, {}, {}, 0.0,
            std::move(initial)},
      next_step_(options_.start_step) {
  traj_.params.validate();
  GraphState& g = traj_.final_state;
  if (options_.digest_initial) traj_.initial_digest = digest_state(g);

  traj_.max_norm = sup_norm(g);
  if (options_.monitors.norm_bound && !(traj_.max_norm <= 1.0 + kNormTolerance)) {
    const auto bad = inadmissible_nodes(g);
    throw MonitorViolation(options_.start_step, bad.empty() ? 0 : bad.front(),
                           "initial state norm exceeds 1");
  }

  mutations_ = options_.mutations;
  std::stable_sort(mutations_.begin(), mutations_.end(),
                   [](const auto& a, const auto& b) { return a.step < b.step; });
  while (next_mutation_ < mutations_.size() &&
         mutations_[next_mutation_].step < options_.start_step) {
    ++next_mutation_;
  }

  if (options_.monitors.norm_tracking) tracker_.emplace(g);
  ws_.reserve(g.cap(), g.dim());
}

void Evolution::advance(std::uint64_t steps) {
  if (steps > 0 && traj_.final_state.node_count() == 0) throw EmptyGraph();
  const std::uint64_t end = next_step_ + steps;
  for (; next_step_ < end; ++next_step_) step_once(next_step_);
}

void Evolution::step_once(std::uint64_t t) {
  GraphState& g = traj_.final_state;
  const MonitorSet& mon = options_.monitors;

  while (next_mutation_ < mutations_.size() && mutations_[next_mutation_].step == t) {
    g.mutate_edge(mutations_[next_mutation_].op, mutations_[next_mutation_].edge);
    ++next_mutation_;
  }

  const NodeId node = traj_.schedule.at(t, g.node_count());
  double old_sq = 0.0;
  if (tracker_) old_sq = squared(g.state_unchecked(node));

  StepMetrics m = apply_generator(g, node, traj_.params, ws_, options_.instrumentation);
  m.step = t;

  const double new_sq = squared(g.state_unchecked(node));
  const double written_norm = std::sqrt(new_sq);
  traj_.max_norm = std::max(traj_.max_norm, written_norm);
  if (mon.norm_bound && !(written_norm <= 1.0 + kNormTolerance)) {
    throw MonitorViolation(t, node, "node norm " + std::to_string(written_norm) + " exceeds 1");
  }
  if (mon.read_cap && options_.instrumentation != Instrumentation::off &&
      m.state_reads > g.cap()) {
    throw MonitorViolation(t, node, "read " + std::to_string(m.state_reads) +
                                        " states, cap is " + std::to_string(g.cap()));
  }
  if (tracker_) {
    tracker_->replace_block(old_sq, new_sq);
    const std::uint64_t done = t - options_.start_step + 1;
    if (mon.tracking_interval > 0 && done % mon.tracking_interval == 0) {
      const double drift = tracker_->resync(g);
      if (!(drift <= mon.drift_tolerance)) {
        throw MonitorViolation(t, node, "norm tracking drift " + std::to_string(drift));
      }
    }
  }

  RunTotals& tot = traj_.totals;
  ++tot.steps;
  tot.state_reads += m.state_reads;
  tot.state_writes += m.state_writes;
  tot.flops += m.flop_proxy;
  tot.max_reads = std::max(tot.max_reads, m.state_reads);
  tot.max_flops = std::max(tot.max_flops, m.flop_proxy);

  const std::uint64_t stride = std::max<std::uint64_t>(1, options_.record_stride);
  if (options_.keep_records && (t - options_.start_step) % stride == 0) {
    traj_.records.push_back(StepRecord{m, traj_.max_norm});
  }
  if (options_.observer) options_.observer(g, m);
}

Trajectory Evolution::finish() && {
  traj_.steps = next_step_ - traj_.start_step;
  return std::move(traj_);
}

Trajectory evolve(GraphState initial, const Schedule& schedule, const UpdateParams& params,
                  std::uint64_t steps, const EvolveOptions& options) {
  Evolution run(std::move(initial), schedule, params, options);
  run.advance(steps);
  return std::move(run).finish();
}

ReplayDigest replay_digest(const Trajectory& trajectory) {
  return digest_state(trajectory.final_state);
}

}  // namespace blgc
