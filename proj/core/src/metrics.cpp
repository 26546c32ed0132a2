#include "blgc/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "blgc/csv.hpp"
#include "blgc/errors.hpp"
#include "blgc/schedule.hpp"

namespace blgc {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

GraphState build_family(const SweepConfig& cfg, std::size_t m) {
  if (cfg.family == SweepFamily::ring) return build_graph(GraphSpec::ring(m), cfg.locality, cfg.dim);
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
  if (side * side != m) {
    throw InvalidArgument("torus2d sweep sizes must be perfect squares, got " + std::to_string(m));
  }
  return build_graph(GraphSpec::torus(side, side), cfg.locality, cfg.dim);
}

}  // namespace

bool SweepResult::counts_invariant() const {
  return std::all_of(rows.begin(), rows.end(), [&](const SweepRow& r) {
    const SweepRow& f = rows.front();
    return r.mean_reads == f.mean_reads && r.max_reads == f.max_reads &&
           r.mean_flops == f.mean_flops && r.max_flops == f.max_flops;
  });
}

double SweepResult::wall_ratio() const {
  if (rows.empty()) return 1.0;
  auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.wall_ns_median < b.wall_ns_median;
  });
  return lo->wall_ns_median > 0.0 ? hi->wall_ns_median / lo->wall_ns_median : 1.0;
}

SweepResult scale_sweep(const SweepConfig& cfg) {
  if (cfg.steps == 0) throw InvalidArgument("sweep needs T >= 1");
  const std::size_t batches = std::clamp<std::size_t>(cfg.batches, 1, cfg.steps);
  SweepResult result;
  for (std::size_t m : cfg.sizes) {
    GraphState g = build_family(cfg, m);
    init_state(g, cfg.init, cfg.seed);

    EvolveOptions opts;
    opts.digest_initial = false;
    Evolution run(std::move(g), Schedule::round_robin(), cfg.params, opts);

    std::vector<double> ns_per_step;
    ns_per_step.reserve(batches);
    std::uint64_t done = 0;
    for (std::size_t b = 0; b < batches; ++b) {
      const std::uint64_t n = cfg.steps / batches + (b < cfg.steps % batches ? 1 : 0);
      const auto t0 = std::chrono::steady_clock::now();
      run.advance(n);
      const auto t1 = std::chrono::steady_clock::now();
      done += n;
      ns_per_step.push_back(
          static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()) /
          static_cast<double>(n));
    }

    const RunTotals& tot = run.totals();
    SweepRow row;
    row.nodes = m;
    row.steps = done;
    row.radius = cfg.locality.radius;
    row.cap = cfg.locality.cap;
    row.dim = cfg.dim;
    row.kind = std::string(to_string(cfg.params.functional.kind));
    row.mean_reads = static_cast<double>(tot.state_reads) / static_cast<double>(tot.steps);
    row.max_reads = tot.max_reads;
    row.mean_flops = static_cast<double>(tot.flops) / static_cast<double>(tot.steps);
    row.max_flops = tot.max_flops;
    row.wall_ns_median = quantile(ns_per_step, 0.5);
    row.wall_ns_iqr = quantile(ns_per_step, 0.75) - quantile(ns_per_step, 0.25);
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "M,T,r,D,d,kind,mean_reads,max_reads,mean_flops,max_flops,wall_ns_median,wall_ns_iqr\n";
  for (const SweepRow& r : result.rows) {
    out << r.nodes << ',' << r.steps << ',' << r.radius << ',' << r.cap << ',' << r.dim << ','
        << r.kind << ',' << format_double(r.mean_reads) << ',' << r.max_reads << ','
        << format_double(r.mean_flops) << ',' << r.max_flops << ','
        << format_double(r.wall_ns_median) << ',' << format_double(r.wall_ns_iqr) << '\n';
  }
}

void write_metrics_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,node,reads,writes,flops,max_norm\n";
  for (const StepRecord& rec : traj.records) {
    const StepMetrics& m = rec.metrics;
    out << m.step << ',' << m.node << ',' << m.state_reads << ',' << m.state_writes << ','
        << m.flop_proxy << ',' << format_double(rec.max_norm) << '\n';
  }
  const RunTotals& tot = traj.totals;
  out << "summary," << tot.steps << ',' << tot.state_reads << ',' << tot.state_writes << ','
      << tot.flops << ',' << format_double(traj.max_norm) << '\n';
}

std::uint64_t expected_flops(FunctionalKind kind, std::size_t k, std::size_t d) noexcept {
  const std::uint64_t step_and_project = 2 * d + 3 * d + 2;
  switch (kind) {
    case FunctionalKind::zero:
      return step_and_project;
    case FunctionalKind::neighbor_average:
      return k * d + 3 * d + step_and_project;
    case FunctionalKind::saturated_mix:
      return (k - 1) * d + (k > 1 ? d : 0) + 6 * d + step_and_project;
    case FunctionalKind::curved_rotation:
      return k * d + 4 * d + 4 + (d >= 2 ? 6 : 0) + step_and_project;
  }
  return 0;
}

}  // namespace blgc
