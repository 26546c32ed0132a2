#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "blgc/evolve.hpp"
#include "blgc/generators.hpp"
#include "blgc/graph_state.hpp"
#include "blgc/metrics.hpp"
#include "blgc/schedule.hpp"

namespace blgc::cli {

// Malformed document or a value of the wrong type. Line numbers are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Well-formed document whose values break one or more constraints.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::round_robin;
  std::vector<NodeId> cycle;
  std::uint64_t seed = 1;
  NodeId start = 0;
};

struct SweepSettings {
  SweepFamily family = SweepFamily::ring;
  std::vector<std::size_t> sizes;
  std::size_t batches = 20;
};

struct RunConfig {
  GraphSpec graph = GraphSpec::ring(16);
  Locality locality{1, 3};
  std::size_t dim = 2;
  InitKind init = InitKind::zeros;
  std::uint64_t state_seed = 1;
  std::optional<std::filesystem::path> snapshot;  // replaces graph + init when set
  UpdateParams params{0.5, LocalFunctional::zero()};
  ScheduleConfig schedule;
  std::uint64_t steps = 0;
  std::vector<ScheduledMutation> mutations;
  MonitorSet monitors;
  SweepSettings sweep;
  std::size_t verify_max_nodes = 1000;
  std::filesystem::path output_dir = "blgc-out";
};

// Relative snapshot paths resolve against `base_dir`.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
// Throws blgc::IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

// Builds or loads the initial state the config describes.
GraphState initial_state(const RunConfig& config);
Schedule make_schedule(const RunConfig& config, const GraphState& initial);

}  // namespace blgc::cli
