#include "blgc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "blgc/csv.hpp"
#include "blgc/errors.hpp"

namespace blgc {

namespace {

double block_norm_sq(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double relative_gap(double a, double b) noexcept {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

}  // namespace

double EmbeddedView::norm() const { return global_l2_norm(*g_); }
double EmbeddedView::sup_norm() const { return blgc::sup_norm(*g_); }
bool EmbeddedView::admissible() const { return inadmissible_nodes(*g_).empty(); }

double global_l2_norm_sq(const GraphState& g) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    sum.add(block_norm_sq(g.state_unchecked(static_cast<NodeId>(i))));
  }
  return sum.value();
}

double global_l2_norm(const GraphState& g) { return std::sqrt(global_l2_norm_sq(g)); }

double global_l2_norm_with_block(const GraphState& g, NodeId i,
                                 std::span<const double> replacement) {
  if (!g.contains(i)) throw UnknownNode(i);
  if (replacement.size() != g.dim()) throw DimensionMismatch(g.dim(), replacement.size());
  CompensatedSum sum;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const auto id = static_cast<NodeId>(k);
    sum.add(block_norm_sq(id == i ? replacement : g.state_unchecked(id)));
  }
  return std::sqrt(sum.value());
}

double sup_norm(const GraphState& g) {
  double best = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    best = std::max(best, block_norm(g.state_unchecked(static_cast<NodeId>(i))));
  }
  return best;
}

std::string_view to_string(CertificateStatus status) noexcept {
  switch (status) {
    case CertificateStatus::ok:
      return "ok";
    case CertificateStatus::inadmissible:
      return "inadmissible";
    case CertificateStatus::identity_failed:
      return "identity_failed";
    case CertificateStatus::bound_failed:
      return "bound_failed";
  }
  return "unknown";
}

BoundCertificate check_update_identity(const GraphState& g, NodeId i, const UpdateParams& p) {
  if (!g.contains(i)) throw UnknownNode(i);
  const StateVector next = next_state(g, i, p);

  BoundCertificate cert;
  cert.node = i;
  const double pre_sq = global_l2_norm_sq(g);
  cert.pre_norm = std::sqrt(pre_sq);
  cert.post_norm = global_l2_norm_with_block(g, i, next);

  const double lhs = cert.post_norm * cert.post_norm;
  const double rhs = pre_sq - block_norm_sq(g.state_unchecked(i)) + block_norm_sq(next);
  cert.identity_residual = (lhs == 0.0 && rhs == 0.0) ? 0.0 : relative_gap(lhs, rhs);
  if (!inadmissible_nodes(g).empty()) {
    cert.status = CertificateStatus::inadmissible;
  } else if (!(cert.identity_residual <= kIdentityTolerance)) {
    cert.status = CertificateStatus::identity_failed;
  }
  return cert;
}

BoundCertificate check_operator_bound(const GraphState& g, NodeId i, const UpdateParams& p,
                                      double lipschitz, double offset) {
  BoundCertificate cert = check_update_identity(g, i, p);
  cert.lipschitz_used = lipschitz;
  cert.offset_used = offset;
  const double grown = lipschitz * cert.pre_norm + offset;
  cert.bound_slack = std::sqrt(cert.pre_norm * cert.pre_norm + grown * grown) - cert.post_norm;
  if (cert.status == CertificateStatus::ok && !(cert.bound_slack >= kBoundSlackTolerance)) {
    cert.status = CertificateStatus::bound_failed;
  }
  return cert;
}

double check_delta_bound(const GraphState& g, NodeId i, const UpdateParams& p) {
  return local_increment(g, i, p).norm();
}

double operator_lipschitz(const UpdateParams& p) noexcept {
  return 1.0 + p.eta * p.functional.lipschitz;
}

double zero_config_offset(const UpdateParams& p, std::size_t arity, std::size_t dim) {
  if (arity == 0) throw InvalidArgument("arity must be >= 1");
  const std::vector<double> zeros(arity * dim, 0.0);
  std::vector<double> f(dim);
  eval_functional(p.functional, NeighborhoodView{zeros, arity, 0, dim}, f);
  for (double& v : f) v = 0.0 + p.eta * v;
  return block_norm(project(f));
}

double max_zero_config_offset(const GraphState& g, const UpdateParams& p) {
  std::set<std::size_t> arities;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    arities.insert(g.neighborhood_unchecked(static_cast<NodeId>(i)).size());
  }
  double best = 0.0;
  for (std::size_t k : arities) best = std::max(best, zero_config_offset(p, k, g.dim()));
  return best;
}

double NormTracker::resync(const GraphState& g) {
  const double exact = global_l2_norm_sq(g);
  const double drift = std::abs(norm_sq_ - exact) / std::max(exact, 1.0);
  norm_sq_ = exact;
  return drift;
}

void write_certificate_header(std::ostream& out) {
  out << "node,pre_norm,post_norm,residual,slack,L,C0,status\n";
}

void write_certificate_row(std::ostream& out, const BoundCertificate& c) {
  out << c.node << ',' << format_double(c.pre_norm) << ',' << format_double(c.post_norm) << ','
      << format_double(c.identity_residual) << ',' << format_double(c.bound_slack) << ','
      << format_double(c.lipschitz_used) << ',' << format_double(c.offset_used) << ','
      << to_string(c.status) << '\n';
}

}  // namespace blgc
