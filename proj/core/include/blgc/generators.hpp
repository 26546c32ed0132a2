#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "blgc/graph_state.hpp"
#include "blgc/step_metrics.hpp"

namespace blgc {

using StateVector = std::vector<double>;

enum class FunctionalKind { zero, neighbor_average, saturated_mix, curved_rotation };

std::string_view to_string(FunctionalKind kind) noexcept;

// Descriptor of the local functional f shared by every node in a run, with
// its declared Lipschitz constant L and output bound B. Both are derived
// analytically in the factory functions; inputs are the neighborhood states
// stacked into one vector with the Euclidean norm, every block in the unit
// ball.
struct LocalFunctional {
  FunctionalKind kind = FunctionalKind::zero;
  std::array<double, 4> params{};
  double lipschitz = 0.0;
  double bound = 0.0;

  static LocalFunctional zero();
  // f = scale * (mean of N_r(i) - s_i)
  static LocalFunctional neighbor_average(double scale);
  // f_k = amplitude * tanh(gain * m_k + self_weight * c_k + bias), m the mean
  // of the neighbors other than the center c. B depends on d.
  static LocalFunctional saturated_mix(double gain, double self_weight, double bias,
                                       double amplitude, std::size_t dim);
  // f = amplitude * tanh(|m|) * R(angle) m/|m|, m the mean of N_r(i), R a
  // rotation of the first two coordinates; f = 0 when m = 0.
  static LocalFunctional curved_rotation(double amplitude, double angle);

  bool operator==(const LocalFunctional&) const = default;
};

struct UpdateParams {
  double eta = 1.0;
  LocalFunctional functional;

  void validate() const;  // throws InvalidArgument unless 0 < eta < inf
};

// ||Delta_i|| <= 2 whenever ||s_i|| <= 1.
struct Increment {
  StateVector delta;
  double norm() const noexcept { return block_norm(delta); }
};

// Neighborhood states gathered contiguously in ascending node id order.
struct NeighborhoodView {
  std::span<const double> states;  // count * dim values
  std::size_t count = 0;
  std::size_t center = 0;  // position of s_i among the rows
  std::size_t dim = 0;

  std::span<const double> row(std::size_t j) const noexcept {
    return states.subspan(j * dim, dim);
  }
};

// Radial projection onto the closed unit ball. Throws NonFiniteInput.
void project(std::span<const double> x, std::span<double> out, std::uint64_t* flops = nullptr);
StateVector project(std::span<const double> x);

// Throws DimensionMismatch on shape errors and NonFiniteInput if the result
// is not finite.
void eval_functional(const LocalFunctional& f, const NeighborhoodView& view,
                     std::span<double> out, std::uint64_t* flops = nullptr);

enum class Instrumentation { off, count, trace };

// Scratch space for one writer. Sized lazily from the graph's D and d.
class UpdateWorkspace {
 public:
  UpdateWorkspace() = default;
  UpdateWorkspace(std::size_t cap, std::size_t dim) { reserve(cap, dim); }

  void reserve(std::size_t cap, std::size_t dim);

  // Node ids whose states were read by the last traced update, in read order.
  std::span<const NodeId> read_trace() const noexcept { return read_trace_; }
  std::span<const double> proposal() const noexcept { return next_; }

 private:
  friend std::span<const double> compute_update(const GraphState&, NodeId,
                                                const UpdateParams&, UpdateWorkspace&,
                                                Instrumentation, RawCounters*);
  std::vector<double> gathered_;
  std::vector<double> f_;
  std::vector<double> step_;
  std::vector<double> next_;
  std::vector<NodeId> read_trace_;
};

// Computes T_i = Pi(s_i + eta * f(N_r(i))) into the workspace without
// touching the graph. Every state read goes through one gather over N_r(i).
std::span<const double> compute_update(const GraphState& g, NodeId i, const UpdateParams& p,
                                       UpdateWorkspace& ws, Instrumentation mode,
                                       RawCounters* counters);

// Writes T_i into node i; every other node is untouched. Throws UnknownNode.
StepMetrics apply_generator(GraphState& g, NodeId i, const UpdateParams& p,
                            UpdateWorkspace& ws, Instrumentation mode = Instrumentation::count);
StepMetrics apply_generator(GraphState& g, NodeId i, const UpdateParams& p);

StateVector next_state(const GraphState& g, NodeId i, const UpdateParams& p);
Increment local_increment(const GraphState& g, NodeId i, const UpdateParams& p);

// Largest ||f(x) - f(y)|| / ||x - y|| over sampled admissible pairs of
// `arity`-block inputs (half independent, half nearby). Deterministic in seed.
double estimate_lipschitz(const LocalFunctional& f, std::size_t arity, std::size_t dim,
                          std::size_t samples, std::uint64_t seed);

// Exact Lipschitz constant of f at a given arity for the affine kinds
// (zero, neighbor_average, saturated_mix pre-tanh); an upper bound for
// curved_rotation. Always <= the declared f.lipschitz.
double arity_lipschitz(const LocalFunctional& f, std::size_t arity);

}  // namespace blgc
