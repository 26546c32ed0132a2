#include "blgc_cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "blgc/errors.hpp"
#include "blgc/snapshot.hpp"

namespace blgc::cli {

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = std::to_string(issues.size()) + " invalid setting(s)";
  for (const auto& s : issues) out += "\n  " + s;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_same_v<T, double>) return "a number";
  else if constexpr (std::is_same_v<T, std::uint64_t>) return "a non-negative integer";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a string";
}

template <class T>
T scalar(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw ParseError(line_of(n), path + ": expected " + type_name<T>());
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    throw ParseError(line_of(n),
                     path + ": cannot read '" + n.Scalar() + "' as " + type_name<T>());
  }
}

template <class T>
std::vector<T> scalar_list(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence()) throw ParseError(line_of(n), path + ": expected a list");
  std::vector<T> out;
  for (std::size_t k = 0; k < n.size(); ++k) {
    out.push_back(scalar<T>(n[k], path + "[" + std::to_string(k) + "]"));
  }
  return out;
}

using Issues = std::vector<std::string>;

// One top-level mapping. Unknown keys are reported, not ignored.
class Section {
 public:
  Section(const YAML::Node& root, std::string name, std::initializer_list<const char*> keys,
          Issues& issues)
      : name_(std::move(name)), node_(root[name_]), issues_(issues) {
    if (!node_ || node_.IsNull()) return;
    if (!node_.IsMap()) throw ParseError(line_of(node_), name_ + ": expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        issues_.push_back(path(key) + ": unknown key");
      }
    }
  }

  bool has(const char* key) const { return node_ && node_.IsMap() && node_[key]; }
  YAML::Node raw(const char* key) const { return node_[key]; }
  std::string path(std::string_view key) const { return name_ + "." + std::string(key); }

  template <class T>
  std::optional<T> get(const char* key) const {
    if (!has(key)) return std::nullopt;
    return scalar<T>(node_[key], path(key));
  }

  void issue(std::string_view key, const std::string& msg) const {
    issues_.push_back(path(key) + ": " + msg);
  }

  // Integer with a lower bound; negative input is a validation issue, not a
  // parse error.
  template <class T>
  void read_at_least(const char* key, T& out, long long lo) const {
    if (auto v = get<long long>(key)) {
      if (*v < lo) {
        issue(key, "must be >= " + std::to_string(lo) + ", got " + std::to_string(*v));
      } else {
        out = static_cast<T>(*v);
      }
    }
  }

  void read_finite(const char* key, double& out) const {
    if (auto v = get<double>(key)) {
      if (!std::isfinite(*v)) issue(key, "must be finite");
      else out = *v;
    }
  }

 private:
  std::string name_;
  YAML::Node node_;
  Issues& issues_;
};

template <class E, std::size_t N>
std::optional<E> pick(const Section& s, const char* key,
                      const std::pair<const char*, E> (&choices)[N], Issues& issues) {
  auto v = s.get<std::string>(key);
  if (!v) return std::nullopt;
  for (const auto& [name, e] : choices) {
    if (*v == name) return e;
  }
  std::string allowed;
  for (const auto& [name, e] : choices) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  issues.push_back(s.path(key) + ": unknown value '" + *v + "' (permitted: " + allowed + ")");
  return std::nullopt;
}

constexpr std::pair<const char*, Topology> kTopologies[] = {
    {"ring", Topology::ring},
    {"torus2d", Topology::torus2d},
    {"random_regular", Topology::random_regular},
    {"edge_list", Topology::edge_list}};
constexpr std::pair<const char*, InitKind> kInits[] = {
    {"zeros", InitKind::zeros}, {"uniform_ball", InitKind::uniform_ball},
    {"surface", InitKind::surface}};
constexpr std::pair<const char*, FunctionalKind> kKinds[] = {
    {"zero", FunctionalKind::zero},
    {"neighbor_average", FunctionalKind::neighbor_average},
    {"saturated_mix", FunctionalKind::saturated_mix},
    {"curved_rotation", FunctionalKind::curved_rotation}};
constexpr std::pair<const char*, ScheduleKind> kSchedules[] = {
    {"round_robin", ScheduleKind::round_robin},
    {"explicit_cycle", ScheduleKind::explicit_cycle},
    {"seeded_permutation_sweep", ScheduleKind::seeded_permutation_sweep},
    {"frontier_bfs", ScheduleKind::frontier_bfs}};
constexpr std::pair<const char*, SweepFamily> kFamilies[] = {{"ring", SweepFamily::ring},
                                                             {"torus2d", SweepFamily::torus2d}};

void read_graph(const YAML::Node& root, RunConfig& cfg, Issues& issues) {
  Section s(root, "graph", {"topology", "nodes", "width", "height", "degree", "seed", "edges"},
            issues);
  const Topology topo = pick(s, "topology", kTopologies, issues).value_or(Topology::ring);
  std::size_t nodes = 16, width = 0, height = 0, degree = 3;
  std::uint64_t seed = s.get<std::uint64_t>("seed").value_or(1);
  s.read_at_least("nodes", nodes, 1);
  s.read_at_least("width", width, 3);
  s.read_at_least("height", height, 3);
  s.read_at_least("degree", degree, 1);

  switch (topo) {
    case Topology::ring:
      if (nodes < 3) s.issue("nodes", "a ring needs at least 3 nodes");
      cfg.graph = GraphSpec::ring(nodes);
      break;
    case Topology::torus2d:
      if (!s.has("width")) s.issue("width", "required for torus2d");
      if (!s.has("height")) s.issue("height", "required for torus2d");
      cfg.graph = GraphSpec::torus(width, height);
      break;
    case Topology::random_regular:
      if (degree >= nodes) s.issue("degree", "must be below graph.nodes");
      if ((nodes * degree) % 2 != 0) s.issue("nodes", "nodes * degree must be even");
      cfg.graph = GraphSpec::random_regular(nodes, degree, seed);
      break;
    case Topology::edge_list: {
      std::vector<Edge> edges;
      if (s.has("edges")) {
        const YAML::Node list = s.raw("edges");
        if (!list.IsSequence()) throw ParseError(line_of(list), "graph.edges: expected a list");
        std::set<Edge> seen;
        for (std::size_t k = 0; k < list.size(); ++k) {
          const std::string path = "graph.edges[" + std::to_string(k) + "]";
          const auto pair = scalar_list<std::uint64_t>(list[k], path);
          if (pair.size() != 2) {
            issues.push_back(path + ": expected [u, v]");
            continue;
          }
          if (pair[0] >= nodes || pair[1] >= nodes) {
            issues.push_back(path + ": endpoint out of range for " + std::to_string(nodes) +
                             " nodes");
          } else if (pair[0] == pair[1]) {
            issues.push_back(path + ": self-loop");
          } else {
            const Edge e = Edge::make(static_cast<NodeId>(pair[0]), static_cast<NodeId>(pair[1]));
            if (!seen.insert(e).second) issues.push_back(path + ": duplicate edge");
            edges.push_back(e);
          }
        }
      }
      cfg.graph = GraphSpec::edge_list(nodes, std::move(edges));
      break;
    }
  }
  if (topo != Topology::edge_list && s.has("edges")) s.issue("edges", "only used by edge_list");
}

void read_functional(const YAML::Node& root, RunConfig& cfg, Issues& issues) {
  Section s(root, "functional",
            {"kind", "scale", "gain", "self_weight", "bias", "amplitude", "angle"}, issues);
  const FunctionalKind kind = pick(s, "kind", kKinds, issues).value_or(FunctionalKind::zero);
  double scale = 1.0, gain = 1.0, self_weight = 0.5, bias = 0.0, amplitude = 1.0, angle = 0.5;
  s.read_finite("scale", scale);
  s.read_finite("gain", gain);
  s.read_finite("self_weight", self_weight);
  s.read_finite("bias", bias);
  s.read_finite("amplitude", amplitude);
  s.read_finite("angle", angle);

  std::vector<const char*> used;
  switch (kind) {
    case FunctionalKind::zero:
      break;
    case FunctionalKind::neighbor_average:
      used = {"scale"};
      break;
    case FunctionalKind::saturated_mix:
      used = {"gain", "self_weight", "bias", "amplitude"};
      break;
    case FunctionalKind::curved_rotation:
      used = {"amplitude", "angle"};
      break;
  }
  for (const char* key : {"scale", "gain", "self_weight", "bias", "amplitude", "angle"}) {
    const bool wanted = std::any_of(used.begin(), used.end(),
                                    [&](const char* u) { return std::string_view(u) == key; });
    if (s.has(key) && !wanted) {
      s.issue(key, "not a parameter of " + std::string(to_string(kind)));
    }
  }
  try {
    switch (kind) {
      case FunctionalKind::zero:
        cfg.params.functional = LocalFunctional::zero();
        break;
      case FunctionalKind::neighbor_average:
        cfg.params.functional = LocalFunctional::neighbor_average(scale);
        break;
      case FunctionalKind::saturated_mix:
        cfg.params.functional =
            LocalFunctional::saturated_mix(gain, self_weight, bias, amplitude, cfg.dim);
        break;
      case FunctionalKind::curved_rotation:
        cfg.params.functional = LocalFunctional::curved_rotation(amplitude, angle);
        break;
    }
  } catch (const InvalidArgument& e) {
    issues.push_back(std::string("functional: ") + e.what());
  }
}

void read_schedule(const YAML::Node& root, RunConfig& cfg, Issues& issues) {
  Section s(root, "schedule", {"kind", "cycle", "seed", "start"}, issues);
  cfg.schedule.kind = pick(s, "kind", kSchedules, issues).value_or(ScheduleKind::round_robin);
  cfg.schedule.seed = s.get<std::uint64_t>("seed").value_or(1);
  s.read_at_least("start", cfg.schedule.start, 0);
  if (s.has("cycle")) {
    for (auto v : scalar_list<std::uint64_t>(s.raw("cycle"), "schedule.cycle")) {
      cfg.schedule.cycle.push_back(static_cast<NodeId>(v));
    }
  }
  if (cfg.schedule.kind == ScheduleKind::explicit_cycle && cfg.schedule.cycle.empty()) {
    s.issue("cycle", "explicit_cycle needs a non-empty list of node ids");
  }
  if (!cfg.snapshot) {
    const std::size_t m = cfg.graph.node_count();
    for (std::size_t k = 0; k < cfg.schedule.cycle.size(); ++k) {
      if (cfg.schedule.cycle[k] >= m) {
        s.issue("cycle", "entry " + std::to_string(k) + " is not a node of the graph");
      }
    }
    if (cfg.schedule.kind == ScheduleKind::frontier_bfs && cfg.schedule.start >= m) {
      s.issue("start", "not a node of the graph");
    }
  }
}

void read_mutations(const YAML::Node& root, RunConfig& cfg, Issues& issues) {
  const YAML::Node list = root["mutations"];
  if (!list || list.IsNull()) return;
  if (!list.IsSequence()) throw ParseError(line_of(list), "mutations: expected a list");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string path = "mutations[" + std::to_string(k) + "]";
    const YAML::Node item = list[k];
    if (!item.IsMap()) throw ParseError(line_of(item), path + ": expected {step, op, u, v}");
    for (const char* key : {"step", "op", "u", "v"}) {
      if (!item[key]) issues.push_back(path + "." + key + ": required");
    }
    for (const auto& kv : item) {
      const auto key = kv.first.as<std::string>();
      if (key != "step" && key != "op" && key != "u" && key != "v") {
        issues.push_back(path + "." + key + ": unknown key");
      }
    }
    if (!item["step"] || !item["op"] || !item["u"] || !item["v"]) continue;
    ScheduledMutation m;
    m.step = scalar<std::uint64_t>(item["step"], path + ".step");
    const auto op = scalar<std::string>(item["op"], path + ".op");
    if (op == "add") {
      m.op = EdgeOp::add;
    } else if (op == "remove") {
      m.op = EdgeOp::remove;
    } else {
      issues.push_back(path + ".op: unknown value '" + op + "' (permitted: add, remove)");
      continue;
    }
    const auto u = scalar<std::uint64_t>(item["u"], path + ".u");
    const auto v = scalar<std::uint64_t>(item["v"], path + ".v");
    if (u == v) {
      issues.push_back(path + ": self-loop");
      continue;
    }
    if (!cfg.snapshot && (u >= cfg.graph.node_count() || v >= cfg.graph.node_count())) {
      issues.push_back(path + ": endpoint is not a node of the graph");
      continue;
    }
    m.edge = Edge::make(static_cast<NodeId>(u), static_cast<NodeId>(v));
    cfg.mutations.push_back(m);
  }
  std::stable_sort(cfg.mutations.begin(), cfg.mutations.end(),
                   [](const auto& a, const auto& b) { return a.step < b.step; });
}

bool perfect_square(std::size_t m) {
  const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
  return s * s == m;
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, e.msg);
  }
  RunConfig cfg;
  if (!root || root.IsNull()) return cfg;
  if (!root.IsMap()) throw ParseError(line_of(root), "top level must be a mapping");

  Issues issues;
  constexpr const char* kSections[] = {"graph",    "locality", "state",  "functional",
                                       "update",   "schedule", "run",    "mutations",
                                       "monitor",  "sweep",    "verify", "output"};
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(std::begin(kSections), std::end(kSections),
                     [&](const char* s) { return key == s; })) {
      issues.push_back(key + ": unknown section");
    }
  }

  {
    Section s(root, "state", {"dim", "init", "seed", "snapshot"}, issues);
    s.read_at_least("dim", cfg.dim, 1);
    cfg.init = pick(s, "init", kInits, issues).value_or(InitKind::zeros);
    cfg.state_seed = s.get<std::uint64_t>("seed").value_or(1);
    if (auto p = s.get<std::string>("snapshot")) {
      std::filesystem::path path(*p);
      cfg.snapshot = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    }
  }
  read_graph(root, cfg, issues);
  {
    Section s(root, "locality", {"radius", "cap"}, issues);
    s.read_at_least("radius", cfg.locality.radius, 1);
    s.read_at_least("cap", cfg.locality.cap, 1);
  }
  read_functional(root, cfg, issues);
  {
    Section s(root, "update", {"eta"}, issues);
    if (auto eta = s.get<double>("eta")) {
      if (!(std::isfinite(*eta) && *eta > 0.0)) {
        std::ostringstream msg;
        msg << "must be > 0 and finite, got " << *eta;
        s.issue("eta", msg.str());
      } else {
        cfg.params.eta = *eta;
      }
    }
  }
  read_schedule(root, cfg, issues);
  {
    Section s(root, "run", {"steps"}, issues);
    cfg.steps = s.get<std::uint64_t>("steps").value_or(0);
  }
  read_mutations(root, cfg, issues);
  {
    Section s(root, "monitor",
              {"norm_bound", "read_cap", "norm_tracking", "tracking_interval", "drift_tolerance"},
              issues);
    cfg.monitors.norm_bound = s.get<bool>("norm_bound").value_or(true);
    cfg.monitors.read_cap = s.get<bool>("read_cap").value_or(true);
    cfg.monitors.norm_tracking = s.get<bool>("norm_tracking").value_or(false);
    s.read_at_least("tracking_interval", cfg.monitors.tracking_interval, 1);
    if (auto tol = s.get<double>("drift_tolerance")) {
      if (!(*tol > 0.0)) s.issue("drift_tolerance", "must be > 0");
      else cfg.monitors.drift_tolerance = *tol;
    }
  }
  {
    Section s(root, "sweep", {"family", "sizes", "batches"}, issues);
    cfg.sweep.family = pick(s, "family", kFamilies, issues).value_or(SweepFamily::ring);
    s.read_at_least("batches", cfg.sweep.batches, 1);
    if (s.has("sizes")) {
      const auto sizes = scalar_list<long long>(s.raw("sizes"), "sweep.sizes");
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        const std::string at = "entry " + std::to_string(k);
        if (sizes[k] < 3) {
          s.issue("sizes", at + " must be >= 3");
        } else if (cfg.sweep.family == SweepFamily::torus2d &&
                   (sizes[k] < 9 || !perfect_square(static_cast<std::size_t>(sizes[k])))) {
          s.issue("sizes", at + " must be a perfect square >= 9 for torus2d");
        } else {
          cfg.sweep.sizes.push_back(static_cast<std::size_t>(sizes[k]));
        }
      }
    }
  }
  {
    Section s(root, "verify", {"max_nodes"}, issues);
    s.read_at_least("max_nodes", cfg.verify_max_nodes, 1);
  }
  {
    Section s(root, "output", {"dir"}, issues);
    if (auto d = s.get<std::string>("dir")) cfg.output_dir = *d;
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

GraphState initial_state(const RunConfig& config) {
  if (!config.snapshot) {
    try {
      GraphState g = build_graph(config.graph, config.locality, config.dim);
      init_state(g, config.init, config.state_seed);
      return g;
    } catch (const ConstructionViolatesCap& e) {
      throw ValidationError({std::string("locality.cap: ") + e.what()});
    } catch (const InvalidArgument& e) {
      throw ValidationError({std::string("graph: ") + e.what()});
    }
  }
  GraphState g = read_snapshot(*config.snapshot);
  std::vector<std::string> issues;
  if (g.dim() != config.dim) {
    issues.push_back("state.dim: config has " + std::to_string(config.dim) + ", snapshot has " +
                     std::to_string(g.dim()));
  }
  if (g.locality().radius != config.locality.radius || g.locality().cap != config.locality.cap) {
    issues.push_back("locality: config (r, D) differs from the snapshot's");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return g;
}

Schedule make_schedule(const RunConfig& config, const GraphState& initial) {
  switch (config.schedule.kind) {
    case ScheduleKind::round_robin:
      return Schedule::round_robin();
    case ScheduleKind::explicit_cycle:
      return Schedule::explicit_cycle(config.schedule.cycle);
    case ScheduleKind::seeded_permutation_sweep:
      return Schedule::seeded_permutation_sweep(config.schedule.seed);
    case ScheduleKind::frontier_bfs:
      return Schedule::frontier_bfs(initial, config.schedule.start);
  }
  return Schedule::round_robin();
}

}  // namespace blgc::cli
