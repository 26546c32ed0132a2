#include "blgc_cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "blgc/digest.hpp"
#include "blgc/errors.hpp"
#include "blgc/evolve.hpp"
#include "blgc/hilbert.hpp"
#include "blgc/metrics.hpp"
#include "blgc/snapshot.hpp"
#include "blgc_cli/config.hpp"

namespace blgc::cli {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t stride = 1;
  bool quiet = false;
  std::string digest;  // replay only
};

struct Context {
  RunConfig config;
  fs::path out_dir;
  const Flags& flags;
  std::ostream& out;
  std::ostream& err;

  void say(const std::string& line) const {
    if (!flags.quiet) out << line << '\n';
  }
};

fs::path resolve_out_dir(const Flags& flags, const RunConfig& config) {
  if (!flags.out.empty()) return flags.out;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

void finish_output(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

void write_snapshot_to(const GraphState& g, const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  write_snapshot(g, path);
}

EvolveOptions evolve_options(const Context& ctx, bool keep_records) {
  EvolveOptions opts;
  opts.monitors = ctx.config.monitors;
  opts.mutations = ctx.config.mutations;
  opts.keep_records = keep_records;
  opts.record_stride = std::max<std::uint64_t>(ctx.flags.stride, 1);
  return opts;
}

int cmd_build(const Context& ctx) {
  const GraphState g = initial_state(ctx.config);
  const fs::path path = ctx.out_dir / "initial.snapshot";
  write_snapshot_to(g, path);
  ctx.say("nodes " + std::to_string(g.node_count()) + ", edges " +
          std::to_string(g.edge_count()) + ", largest N_r " +
          std::to_string(g.max_neighborhood_size()) + " (cap " +
          std::to_string(g.locality().cap) + ")");
  ctx.say("wrote " + path.string());
  return kExitOk;
}

int cmd_evolve(const Context& ctx) {
  const GraphState g = initial_state(ctx.config);
  const Schedule sched = make_schedule(ctx.config, g);
  const Trajectory traj = evolve(g, sched, ctx.config.params, ctx.config.steps,
                                 evolve_options(ctx, true));

  write_snapshot_to(traj.final_state, ctx.out_dir / "final.snapshot");
  {
    const fs::path path = ctx.out_dir / "metrics.csv";
    auto f = open_output(path);
    write_metrics_csv(f, traj);
    finish_output(f, path);
  }
  const std::string hex = replay_digest(traj).hex();
  {
    const fs::path path = ctx.out_dir / "digest.txt";
    auto f = open_output(path);
    f << hex << '\n';
    finish_output(f, path);
  }
  std::ostringstream msg;
  msg << traj.steps << " steps, reads " << traj.totals.state_reads << ", flops "
      << traj.totals.flops << ", max node norm " << traj.max_norm;
  ctx.say(msg.str());
  ctx.say("digest " + hex);
  return kExitOk;
}

int cmd_sweep(const Context& ctx) {
  const RunConfig& c = ctx.config;
  std::vector<std::string> issues;
  if (c.sweep.sizes.empty()) issues.push_back("sweep.sizes: required for sweep");
  if (c.steps < c.sweep.batches) {
    issues.push_back("run.steps: sweep needs at least sweep.batches steps");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  SweepConfig sc;
  sc.family = c.sweep.family;
  sc.sizes = c.sweep.sizes;
  sc.locality = c.locality;
  sc.dim = c.dim;
  sc.params = c.params;
  sc.steps = c.steps;
  sc.batches = c.sweep.batches;
  sc.init = c.init;
  sc.seed = c.state_seed;
  SweepResult res;
  try {
    res = scale_sweep(sc);
  } catch (const ConstructionViolatesCap& e) {
    throw ValidationError({std::string("locality.cap: ") + e.what()});
  }

  const fs::path path = ctx.out_dir / "sweep.csv";
  auto f = open_output(path);
  write_sweep_csv(f, res);
  finish_output(f, path);
  for (const auto& row : res.rows) {
    std::ostringstream msg;
    msg << "M=" << row.nodes << " reads " << row.mean_reads << " flops " << row.mean_flops
        << " ns/step " << row.wall_ns_median;
    ctx.say(msg.str());
  }
  ctx.say(res.counts_invariant() ? "counts identical across sizes"
                                 : "counts differ across sizes");
  return kExitOk;
}

int cmd_verify(const Context& ctx) {
  const GraphState g = initial_state(ctx.config);
  const UpdateParams& p = ctx.config.params;
  const fs::path path = ctx.out_dir / "certificates.csv";
  auto f = open_output(path);
  write_certificate_header(f);

  const auto bad = inadmissible_nodes(g);
  if (!bad.empty()) {
    for (NodeId i : bad) {
      write_certificate_row(f, check_update_identity(g, i, p));
      std::ostringstream msg;
      msg << "node " << i << " is outside the unit ball (norm " << block_norm(g.state(i))
          << ")";
      ctx.err << msg.str() << '\n';
    }
    finish_output(f, path);
    return kExitInvariant;
  }

  const double lipschitz = operator_lipschitz(p);
  const double offset = max_zero_config_offset(g, p);
  const std::size_t checked = std::min(g.node_count(), ctx.config.verify_max_nodes);
  int failures = 0;
  for (NodeId i = 0; i < checked; ++i) {
    const auto cert = check_operator_bound(g, i, p, lipschitz, offset);
    write_certificate_row(f, cert);
    if (cert.status != CertificateStatus::ok) {
      ctx.err << "node " << i << ": " << to_string(cert.status) << '\n';
      ++failures;
    }
    const double delta = check_delta_bound(g, i, p);
    if (!(delta <= kDeltaBound + kNormTolerance)) {
      ctx.err << "node " << i << ": increment norm " << delta << " exceeds 2\n";
      ++failures;
    }
  }
  finish_output(f, path);
  if (failures > 0) return kExitInvariant;

  EvolveOptions opts = evolve_options(ctx, false);
  opts.monitors.norm_bound = true;
  opts.monitors.read_cap = true;
  opts.monitors.norm_tracking = true;
  const Trajectory traj = evolve(g, make_schedule(ctx.config, g), p, ctx.config.steps, opts);
  if (global_l2_norm(traj.final_state) >
      std::sqrt(static_cast<double>(g.node_count())) * (1.0 + kNormTolerance)) {
    ctx.err << "global norm exceeds sqrt(M)\n";
    return kExitInvariant;
  }
  ctx.say(std::to_string(checked) + " certificates ok, " + std::to_string(traj.steps) +
          " monitored steps ok");
  return kExitOk;
}

int cmd_replay(const Context& ctx) {
  const fs::path path =
      ctx.flags.digest.empty() ? ctx.out_dir / "digest.txt" : fs::path(ctx.flags.digest);
  std::ifstream in(path);
  if (!in) throw IoError("cannot read digest " + path.string());
  std::string line;
  std::getline(in, line);
  const ReplayDigest expected = ReplayDigest::from_hex(line);

  const GraphState g = initial_state(ctx.config);
  EvolveOptions opts = evolve_options(ctx, false);
  opts.instrumentation = Instrumentation::off;
  opts.monitors.read_cap = false;
  const Trajectory traj =
      evolve(g, make_schedule(ctx.config, g), ctx.config.params, ctx.config.steps, opts);
  const ReplayDigest actual = replay_digest(traj);
  if (actual != expected) {
    ctx.err << "digest mismatch: expected " << expected.hex() << ", got " << actual.hex() << '\n';
    return kExitInvariant;
  }
  ctx.say("digest match " + actual.hex());
  return kExitOk;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "config parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "config invalid: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CapViolation& e) {
    err << "mutations: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DuplicateEdge& e) {
    err << "mutations: " << e.what() << '\n';
    return kExitValidation;
  } catch (const MissingEdge& e) {
    err << "mutations: " << e.what() << '\n';
    return kExitValidation;
  } catch (const MonitorViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded local generator harness"};
  app.require_subcommand(1);
  Flags flags;

  using Command = int (*)(const Context&);
  std::vector<std::pair<CLI::App*, Command>> commands;
  auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "Run configuration (YAML)")->required();
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--stride", flags.stride, "Keep every k-th metrics row")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", flags.quiet, "Suppress progress output");
    commands.emplace_back(sub, fn);
    return sub;
  };
  add("build", "Construct the initial state and write initial.snapshot", cmd_build);
  add("evolve", "Run the schedule; write final.snapshot, metrics.csv, digest.txt", cmd_evolve);
  add("sweep", "Operation counts and wall-clock per step across graph sizes", cmd_sweep);
  add("verify", "Check admissibility, operator bounds and monitors", cmd_verify);
  add("replay", "Re-run and compare against a stored digest", cmd_replay)
      ->add_option("--digest", flags.digest, "Digest file (default <out>/digest.txt)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    return guarded(err, [&, fn = fn] {
      RunConfig config = load_config(flags.config);
      const fs::path out_dir = resolve_out_dir(flags, config);
      Context ctx{std::move(config), out_dir, flags, out, err};
      return fn(ctx);
    });
  }
  return kExitUsage;
}

}  // namespace blgc::cli
