#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>

#include "blgc/generators.hpp"
#include "blgc/graph_state.hpp"

namespace blgc {

// The state viewed as one vector Psi = sum_i |i> (x) s_i of M*d coordinates.
// A view over the node blocks; nothing is copied.
class EmbeddedView {
 public:
  explicit EmbeddedView(const GraphState& g) noexcept : g_(&g) {}

  std::size_t coordinate_count() const noexcept { return g_->states().size(); }
  std::span<const double> coordinates() const noexcept { return g_->states(); }
  std::span<const double> block(NodeId i) const { return g_->state(i); }

  double norm() const;
  double sup_norm() const;
  bool admissible() const;

 private:
  const GraphState* g_;
};

// ||Psi||^2 = sum_i ||s_i||^2 with compensated (Neumaier) summation.
double global_l2_norm_sq(const GraphState& g);
double global_l2_norm(const GraphState& g);
// Same as global_l2_norm with block i replaced by `replacement`.
double global_l2_norm_with_block(const GraphState& g, NodeId i,
                                 std::span<const double> replacement);
// max_i ||s_i||.
double sup_norm(const GraphState& g);

enum class CertificateStatus { ok, inadmissible, identity_failed, bound_failed };
std::string_view to_string(CertificateStatus status) noexcept;

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kBoundSlackTolerance = -1e-10;
inline constexpr double kDeltaBound = 2.0;

struct BoundCertificate {
  NodeId node = 0;
  double pre_norm = 0.0;           // ||Psi||
  double post_norm = 0.0;          // ||G_i Psi||, full recomputation
  double identity_residual = 0.0;  // relative gap of the single-site identity
  double bound_slack = 0.0;        // sqrt(||Psi||^2 + (L ||Psi|| + C0)^2) - ||G_i Psi||
  double lipschitz_used = 0.0;
  double offset_used = 0.0;
  CertificateStatus status = CertificateStatus::ok;
};

// Compares ||G_i Psi||^2 recomputed over all blocks against
// ||Psi||^2 - ||s_i||^2 + ||T_i||^2. Throws UnknownNode.
BoundCertificate check_update_identity(const GraphState& g, NodeId i, const UpdateParams& p);

// Also evaluates ||G_i Psi|| <= sqrt(||Psi||^2 + (L ||Psi|| + C0)^2).
BoundCertificate check_operator_bound(const GraphState& g, NodeId i, const UpdateParams& p,
                                      double lipschitz, double offset);

// ||Delta_i||.
double check_delta_bound(const GraphState& g, NodeId i, const UpdateParams& p);

// Lipschitz constant of Psi -> Pi(s_i + eta f(N_r(i))) from the declared L of
// f: restriction to a neighborhood does not increase norms, Pi is
// non-expansive, so 1 + eta * L works.
double operator_lipschitz(const UpdateParams& p) noexcept;

// C0 = ||T_i(0)|| = ||Pi(eta f(0, ..., 0))|| for a neighborhood of `arity` rows.
double zero_config_offset(const UpdateParams& p, std::size_t arity, std::size_t dim);
// Largest C0 over the neighborhood sizes present in g.
double max_zero_config_offset(const GraphState& g, const UpdateParams& p);

// Running ||Psi||^2 maintained through the single-site identity, with
// periodic full recomputation to expose drift.
class NormTracker {
 public:
  explicit NormTracker(const GraphState& g) : norm_sq_(global_l2_norm_sq(g)) {}

  void replace_block(double old_block_sq, double new_block_sq) noexcept {
    norm_sq_ += new_block_sq - old_block_sq;
  }
  double norm_sq() const noexcept { return norm_sq_; }

  // Relative drift |tracked - exact| / max(exact, 1); resynchronises.
  double resync(const GraphState& g);

 private:
  double norm_sq_;
};

// Columns: node,pre_norm,post_norm,residual,slack,L,C0,status
void write_certificate_header(std::ostream& out);
void write_certificate_row(std::ostream& out, const BoundCertificate& c);

}  // namespace blgc
