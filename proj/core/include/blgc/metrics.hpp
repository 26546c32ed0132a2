#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "blgc/evolve.hpp"
#include "blgc/generators.hpp"
#include "blgc/graph_state.hpp"
#include "blgc/step_metrics.hpp"

namespace blgc {

// Topology families whose local structure does not depend on M.
enum class SweepFamily { ring, torus2d };

struct SweepConfig {
  SweepFamily family = SweepFamily::ring;
  std::vector<std::size_t> sizes;  // M values; torus2d needs perfect squares
  Locality locality{1, 3};
  std::size_t dim = 8;
  UpdateParams params;
  std::uint64_t steps = 100000;  // T per size
  std::size_t batches = 20;      // wall-clock samples per size
  InitKind init = InitKind::uniform_ball;
  std::uint64_t seed = 1;
};

struct SweepRow {
  std::size_t nodes = 0;
  std::uint64_t steps = 0;
  std::size_t radius = 0;
  std::size_t cap = 0;
  std::size_t dim = 0;
  std::string kind;
  double mean_reads = 0.0;
  std::uint64_t max_reads = 0;
  double mean_flops = 0.0;
  std::uint64_t max_flops = 0;
  double wall_ns_median = 0.0;  // per step, median over batches
  double wall_ns_iqr = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  // Operation-count columns identical in every row.
  bool counts_invariant() const;
  // Largest over smallest per-step wall-clock median.
  double wall_ratio() const;
};

// Runs `steps` round-robin updates on each size. Rows come back in the order
// of config.sizes. Wall-clock uses a monotonic clock over `batches` equal
// batches; only the counts are exact.
SweepResult scale_sweep(const SweepConfig& config);

// Columns: M,T,r,D,d,kind,mean_reads,max_reads,mean_flops,max_flops,
// wall_ns_median,wall_ns_iqr
void write_sweep_csv(std::ostream& out, const SweepResult& result);

// Per-step metrics CSV: t,node,reads,writes,flops,max_norm followed by a
// summary row "summary,<steps>,<reads>,<writes>,<flops>,<max_norm>".
void write_metrics_csv(std::ostream& out, const Trajectory& trajectory);

// Closed-form flop_proxy of one update with a neighborhood of k rows in
// dimension d, mirroring the counters in the functional and projection code.
std::uint64_t expected_flops(FunctionalKind kind, std::size_t k, std::size_t d) noexcept;

}  // namespace blgc
