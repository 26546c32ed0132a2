#include "blgc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blgc/errors.hpp"
#include "blgc/rng.hpp"

// Canonical floating-point order. The reference evolver in tests/oracle
// commits to the same order so the two can be compared bit-for-bit:
//
//  * sums over a neighborhood start from 0.0 and add rows in ascending node
//    id order, one component at a time; a mean is that sum divided by the
//    count;
//  * a vector norm is sqrt of squares summed in component order from 0.0;
//  * saturated_mix: v = (gain * m + self_weight * c) + bias;
//  * curved_rotation: factor = (amplitude * tanh(rho)) / rho, u = factor * m,
//    then (cos * u0 - sin * u1, sin * u0 + cos * u1, u2, ...);
//  * step: y = s_i + eta * f;  projection: y * (1 / |y|) when |y| > 1.

namespace blgc {

namespace {

void count(std::uint64_t* flops, std::uint64_t n) noexcept {
  if (flops != nullptr) *flops += n;
}

void require_finite_params(std::span<const double> values, std::string_view what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite parameter");
  }
}

void check_finite_output(std::span<const double> out, std::string_view where) {
  for (double v : out) {
    if (!std::isfinite(v)) throw NonFiniteInput("non-finite value produced by " + std::string(where));
  }
}

void sum_rows(const NeighborhoodView& v, std::span<double> acc, bool skip_center) {
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t j = 0; j < v.count; ++j) {
    if (skip_center && j == v.center) continue;
    const auto row = v.row(j);
    for (std::size_t c = 0; c < v.dim; ++c) acc[c] += row[c];
  }
}

}  // namespace

std::string_view to_string(FunctionalKind kind) noexcept {
  switch (kind) {
    case FunctionalKind::zero:
      return "zero";
    case FunctionalKind::neighbor_average:
      return "neighbor_average";
    case FunctionalKind::saturated_mix:
      return "saturated_mix";
    case FunctionalKind::curved_rotation:
      return "curved_rotation";
  }
  return "unknown";
}

LocalFunctional LocalFunctional::zero() { return LocalFunctional{}; }

// x -> scale * (mean_j x_j - x_c) is linear. Per component its coefficient
// row has (1/k - 1) at the center and 1/k elsewhere, so the operator norm is
// |scale| * sqrt((k-1)/k) < |scale|. With every block in the unit ball,
// |mean - c| <= 2.
LocalFunctional LocalFunctional::neighbor_average(double scale) {
  require_finite_params(std::array{scale}, "neighbor_average");
  LocalFunctional f;
  f.kind = FunctionalKind::neighbor_average;
  f.params = {scale, 0.0, 0.0, 0.0};
  f.lipschitz = std::abs(scale);
  f.bound = 2.0 * std::abs(scale);
  return f;
}

// tanh is 1-Lipschitz componentwise, so L is |amplitude| times the norm of
// x -> gain * m + self_weight * c. With n non-center rows that norm is
// sqrt(self_weight^2 + gain^2 / n) <= sqrt(self_weight^2 + gain^2).
// Bound: |tanh(v)| <= min(|v|, sqrt(d)) and |v| <= |gain| + |self_weight| +
// |bias| sqrt(d) on admissible inputs.
LocalFunctional LocalFunctional::saturated_mix(double gain, double self_weight, double bias,
                                               double amplitude, std::size_t dim) {
  require_finite_params(std::array{gain, self_weight, bias, amplitude}, "saturated_mix");
  if (dim == 0) throw InvalidArgument("saturated_mix: dim must be >= 1");
  LocalFunctional f;
  f.kind = FunctionalKind::saturated_mix;
  f.params = {gain, self_weight, bias, amplitude};
  f.lipschitz = std::abs(amplitude) * std::hypot(gain, self_weight);
  const double root_d = std::sqrt(static_cast<double>(dim));
  f.bound = std::abs(amplitude) *
            std::min(root_d, std::abs(gain) + std::abs(self_weight) + std::abs(bias) * root_d);
  return f;
}

// The radial map m -> tanh(|m|) m/|m| has Lipschitz constant
// max(sup tanh', sup tanh(r)/r) = 1. The mean over k rows has norm 1/sqrt(k)
// and the rotation is orthogonal, so L = |amplitude| / sqrt(k) <= |amplitude|.
// |f| = |amplitude| tanh(|m|) < |amplitude|.
LocalFunctional LocalFunctional::curved_rotation(double amplitude, double angle) {
  require_finite_params(std::array{amplitude, angle}, "curved_rotation");
  LocalFunctional f;
  f.kind = FunctionalKind::curved_rotation;
  f.params = {amplitude, angle, std::cos(angle), std::sin(angle)};
  f.lipschitz = std::abs(amplitude);
  f.bound = std::abs(amplitude);
  return f;
}

void UpdateParams::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("eta must be positive and finite, got " + std::to_string(eta));
  }
}

void project(std::span<const double> x, std::span<double> out, std::uint64_t* flops) {
  if (out.size() != x.size()) throw DimensionMismatch(x.size(), out.size());
  for (double v : x) {
    if (!std::isfinite(v)) throw NonFiniteInput("projection input has a non-finite component");
  }
  double sq = 0.0;
  for (double v : x) sq += v * v;
  double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) {
    // Squares overflowed; rescale by the largest magnitude first.
    double big = 0.0;
    for (double v : x) big = std::max(big, std::abs(v));
    double scaled = 0.0;
    for (double v : x) scaled += (v / big) * (v / big);
    norm = big * std::sqrt(scaled);
  }
  const double scale = norm > 1.0 ? 1.0 / norm : 1.0;
  for (std::size_t c = 0; c < x.size(); ++c) out[c] = x[c] * scale;
  count(flops, 3 * x.size() + 2);
}

StateVector project(std::span<const double> x) {
  StateVector out(x.size());
  project(x, out);
  return out;
}

void eval_functional(const LocalFunctional& f, const NeighborhoodView& v, std::span<double> out,
                     std::uint64_t* flops) {
  const std::size_t d = v.dim;
  if (out.size() != d) throw DimensionMismatch(d, out.size());
  if (v.states.size() != v.count * d) throw DimensionMismatch(v.count * d, v.states.size());
  if (v.count == 0 || v.center >= v.count) {
    throw InvalidArgument("neighborhood view must contain its center");
  }
  const auto center = v.row(v.center);
  const auto k = static_cast<double>(v.count);

  switch (f.kind) {
    case FunctionalKind::zero:
      std::fill(out.begin(), out.end(), 0.0);
      return;

    case FunctionalKind::neighbor_average: {
      const double scale = f.params[0];
      sum_rows(v, out, false);
      for (std::size_t c = 0; c < d; ++c) out[c] = scale * (out[c] / k - center[c]);
      count(flops, v.count * d + 3 * d);
      break;
    }

    case FunctionalKind::saturated_mix: {
      const auto [gain, self_weight, bias, amplitude] = f.params;
      const std::size_t others = v.count - 1;
      sum_rows(v, out, true);
      for (std::size_t c = 0; c < d; ++c) {
        const double m = others > 0 ? out[c] / static_cast<double>(others) : 0.0;
        const double pre = (gain * m + self_weight * center[c]) + bias;
        out[c] = amplitude * std::tanh(pre);
      }
      count(flops, others * d + (others > 0 ? d : 0) + 6 * d);
      break;
    }

    case FunctionalKind::curved_rotation: {
      const double amplitude = f.params[0];
      const double cos_a = f.params[2];
      const double sin_a = f.params[3];
      sum_rows(v, out, false);
      double rho_sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        out[c] = out[c] / k;
        rho_sq += out[c] * out[c];
      }
      const double rho = std::sqrt(rho_sq);
      const double factor = rho > 0.0 ? (amplitude * std::tanh(rho)) / rho : 0.0;
      for (std::size_t c = 0; c < d; ++c) out[c] = factor * out[c];
      if (d >= 2) {
        const double u0 = out[0];
        const double u1 = out[1];
        out[0] = cos_a * u0 - sin_a * u1;
        out[1] = sin_a * u0 + cos_a * u1;
      }
      count(flops, v.count * d + d + 2 * d + 1 + 3 + d + (d >= 2 ? 6 : 0));
      break;
    }
  }
  check_finite_output(out, to_string(f.kind));
}

void UpdateWorkspace::reserve(std::size_t cap, std::size_t dim) {
  if (gathered_.size() < cap * dim) gathered_.resize(cap * dim);
  if (f_.size() != dim) {
    f_.assign(dim, 0.0);
    step_.assign(dim, 0.0);
    next_.assign(dim, 0.0);
  }
}

std::span<const double> compute_update(const GraphState& g, NodeId i, const UpdateParams& p,
                                       UpdateWorkspace& ws, Instrumentation mode,
                                       RawCounters* counters) {
  const auto ball = g.neighborhood(i);
  const std::size_t d = g.dim();
  ws.reserve(ball.size(), d);

  const bool counting = mode != Instrumentation::off && counters != nullptr;
  if (mode == Instrumentation::trace) ws.read_trace_.clear();

  std::size_t center = 0;
  double* dst = ws.gathered_.data();
  for (std::size_t j = 0; j < ball.size(); ++j) {
    const auto row = g.state_unchecked(ball[j]);
    std::copy(row.begin(), row.end(), dst + j * d);
    if (ball[j] == i) center = j;
    if (mode == Instrumentation::trace) ws.read_trace_.push_back(ball[j]);
  }

  std::uint64_t flops = 0;
  std::uint64_t* flop_sink = counting ? &flops : nullptr;
  const NeighborhoodView view{std::span<const double>(ws.gathered_.data(), ball.size() * d),
                              ball.size(), center, d};
  eval_functional(p.functional, view, ws.f_, flop_sink);

  const auto self = view.row(center);
  for (std::size_t c = 0; c < d; ++c) ws.step_[c] = self[c] + p.eta * ws.f_[c];
  count(flop_sink, 2 * d);
  project(ws.step_, ws.next_, flop_sink);

  if (counting) {
    counters->state_reads += ball.size();
    counters->flops += flops;
  }
  return ws.next_;
}

StepMetrics apply_generator(GraphState& g, NodeId i, const UpdateParams& p, UpdateWorkspace& ws,
                            Instrumentation mode) {
  RawCounters raw;
  const auto next = compute_update(g, i, p, ws, mode, &raw);
  const auto slot = g.mutable_state_unchecked(i);
  std::copy(next.begin(), next.end(), slot.begin());
  if (mode != Instrumentation::off) raw.state_writes = 1;
  return record_step(0, i, raw);
}

StepMetrics apply_generator(GraphState& g, NodeId i, const UpdateParams& p) {
  UpdateWorkspace ws(g.cap(), g.dim());
  return apply_generator(g, i, p, ws, Instrumentation::count);
}

StateVector next_state(const GraphState& g, NodeId i, const UpdateParams& p) {
  UpdateWorkspace ws(g.cap(), g.dim());
  const auto next = compute_update(g, i, p, ws, Instrumentation::off, nullptr);
  return StateVector(next.begin(), next.end());
}

Increment local_increment(const GraphState& g, NodeId i, const UpdateParams& p) {
  Increment inc{next_state(g, i, p)};
  const auto self = g.state_unchecked(i);
  for (std::size_t c = 0; c < inc.delta.size(); ++c) inc.delta[c] -= self[c];
  return inc;
}

double estimate_lipschitz(const LocalFunctional& f, std::size_t arity, std::size_t dim,
                          std::size_t samples, std::uint64_t seed) {
  if (arity == 0 || dim == 0) throw InvalidArgument("estimate_lipschitz: arity and dim >= 1");
  if (samples == 0) throw InvalidArgument("estimate_lipschitz: samples must be >= 1");
  SplitMix64 rng(seed);
  std::vector<double> x(arity * dim), y(arity * dim), noise(dim), fx(dim), fy(dim);
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t center = static_cast<std::size_t>(rng.below(arity));
    for (std::size_t b = 0; b < arity; ++b) {
      sample_in_ball(rng, std::span<double>(x).subspan(b * dim, dim), false);
    }
    if (s % 2 == 0) {
      for (std::size_t b = 0; b < arity; ++b) {
        sample_in_ball(rng, std::span<double>(y).subspan(b * dim, dim), false);
      }
    } else {
      const double step = std::pow(10.0, -1.0 - 3.0 * rng.uniform());
      for (std::size_t b = 0; b < arity; ++b) {
        sample_in_ball(rng, noise, true);
        for (std::size_t c = 0; c < dim; ++c) noise[c] = x[b * dim + c] + step * noise[c];
        project(noise, std::span<double>(y).subspan(b * dim, dim));
      }
    }
    eval_functional(f, NeighborhoodView{x, arity, center, dim}, fx);
    eval_functional(f, NeighborhoodView{y, arity, center, dim}, fy);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t c = 0; c < dim; ++c) num += (fx[c] - fy[c]) * (fx[c] - fy[c]);
    for (std::size_t c = 0; c < x.size(); ++c) den += (x[c] - y[c]) * (x[c] - y[c]);
    if (den > 0.0) best = std::max(best, std::sqrt(num) / std::sqrt(den));
  }
  return best;
}

double arity_lipschitz(const LocalFunctional& f, std::size_t arity) {
  if (arity == 0) throw InvalidArgument("arity must be >= 1");
  const auto k = static_cast<double>(arity);
  switch (f.kind) {
    case FunctionalKind::zero:
      return 0.0;
    case FunctionalKind::neighbor_average:
      return std::abs(f.params[0]) * std::sqrt((k - 1.0) / k);
    case FunctionalKind::saturated_mix: {
      const auto [gain, self_weight, bias, amplitude] = f.params;
      const double others = k - 1.0;
      const double mix = others > 0.0 ? std::sqrt(self_weight * self_weight + gain * gain / others)
                                      : std::abs(self_weight);
      return std::abs(amplitude) * mix;
    }
    case FunctionalKind::curved_rotation:
      return std::abs(f.params[0]) / std::sqrt(k);
  }
  return f.lipschitz;
}

}  // namespace blgc
