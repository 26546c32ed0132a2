#include "blgc/graph_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "blgc/errors.hpp"
#include "blgc/rng.hpp"

namespace blgc {

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxBallSlots = std::size_t{1} << 30;

std::vector<Edge> ring_edges(std::size_t n) {
  if (n < 3) throw InvalidArgument("ring needs at least 3 nodes, got " + std::to_string(n));
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back(Edge::make(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % n)));
  }
  return edges;
}

std::vector<Edge> torus_edges(std::size_t w, std::size_t h) {
  if (w < 3 || h < 3) {
    throw InvalidArgument("torus2d needs width and height >= 3, got " + std::to_string(w) +
                          "x" + std::to_string(h));
  }
  std::vector<Edge> edges;
  edges.reserve(2 * w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto id = static_cast<NodeId>(y * w + x);
      edges.push_back(Edge::make(id, static_cast<NodeId>(y * w + (x + 1) % w)));
      edges.push_back(Edge::make(id, static_cast<NodeId>(((y + 1) % h) * w + x)));
    }
  }
  return edges;
}

// Pairing (configuration) model with rejection until the multigraph is simple.
std::vector<Edge> random_regular_edges(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (degree == 0 || degree >= n) {
    throw InvalidArgument("random_regular needs 0 < degree < nodes");
  }
  if ((n * degree) % 2 != 0) {
    throw InvalidArgument("random_regular needs nodes * degree to be even");
  }
  SplitMix64 rng(seed);
  std::vector<NodeId> stubs(n * degree);
  std::vector<Edge> edges(stubs.size() / 2);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<NodeId>(i / degree);
    for (std::size_t i = stubs.size() - 1; i > 0; --i) {
      std::swap(stubs[i], stubs[rng.below(i + 1)]);
    }
    bool simple = true;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (stubs[2 * k] == stubs[2 * k + 1]) {
        simple = false;
        break;
      }
      edges[k] = Edge::make(stubs[2 * k], stubs[2 * k + 1]);
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) == edges.end()) return edges;
  }
  throw InvalidArgument("random_regular: no simple graph found after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace

GraphSpec GraphSpec::ring(std::size_t nodes) {
  GraphSpec s;
  s.topology = Topology::ring;
  s.nodes = nodes;
  return s;
}

GraphSpec GraphSpec::torus(std::size_t width, std::size_t height) {
  GraphSpec s;
  s.topology = Topology::torus2d;
  s.width = width;
  s.height = height;
  return s;
}

GraphSpec GraphSpec::random_regular(std::size_t nodes, std::size_t degree, std::uint64_t seed) {
  GraphSpec s;
  s.topology = Topology::random_regular;
  s.nodes = nodes;
  s.degree = degree;
  s.seed = seed;
  return s;
}

GraphSpec GraphSpec::edge_list(std::size_t nodes, std::vector<Edge> edges) {
  GraphSpec s;
  s.topology = Topology::edge_list;
  s.nodes = nodes;
  s.edges = std::move(edges);
  return s;
}

std::size_t GraphSpec::node_count() const noexcept {
  return topology == Topology::torus2d ? width * height : nodes;
}

GraphState::GraphState(std::size_t nodes, std::span<const Edge> edges, Locality locality,
                       std::size_t dim)
    : dim_(dim), locality_(locality), adjacency_(nodes) {
  if (dim == 0) throw InvalidArgument("state dimension must be >= 1");
  if (locality.radius == 0) throw InvalidArgument("radius must be >= 1");
  if (locality.cap == 0) throw InvalidArgument("cap D must be >= 1");
  if (nodes > std::numeric_limits<NodeId>::max()) {
    throw InvalidArgument("node count exceeds NodeId range");
  }
  ball_stride_ = std::max<std::size_t>(1, std::min(locality.cap, nodes));
  if (nodes > 0 && ball_stride_ > kMaxBallSlots / nodes) {
    throw InvalidArgument("neighborhood cache for M = " + std::to_string(nodes) +
                          ", D = " + std::to_string(locality.cap) + " is too large");
  }

  for (const Edge& raw : edges) {
    const Edge e = Edge::make(raw.u, raw.v);
    check_node(e.u);
    check_node(e.v);
    if (e.u == e.v) throw SelfLoop(e.u);
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    auto& adj = adjacency_[i];
    std::sort(adj.begin(), adj.end());
    if (auto dup = std::adjacent_find(adj.begin(), adj.end()); dup != adj.end()) {
      throw DuplicateEdge(i, *dup);
    }
    edge_count_ += adj.size();
  }
  edge_count_ /= 2;

  ball_ids_.assign(nodes * ball_stride_, 0);
  ball_size_.assign(nodes, 0);
  states_.assign(nodes * dim, 0.0);
  visit_mark_.assign(nodes, 0);

  std::vector<NodeId> ball;
  for (std::size_t i = 0; i < nodes; ++i) {
    const auto id = static_cast<NodeId>(i);
    if (!collect_ball(id, locality_.cap, ball)) {
      collect_ball(id, kUnbounded, ball);
      throw ConstructionViolatesCap(id, ball.size(), locality_.cap);
    }
    store_ball(id, ball);
  }
}

void GraphState::check_node(NodeId i) const {
  if (!contains(i)) throw UnknownNode(i);
}

std::span<const NodeId> GraphState::neighborhood(NodeId i) const {
  check_node(i);
  return neighborhood_unchecked(i);
}

std::size_t GraphState::max_neighborhood_size() const noexcept {
  std::uint32_t best = 0;
  for (auto s : ball_size_) best = std::max(best, s);
  return best;
}

std::span<const NodeId> GraphState::adjacent(NodeId i) const {
  check_node(i);
  return adjacency_[i];
}

bool GraphState::has_edge(NodeId a, NodeId b) const {
  check_node(a);
  check_node(b);
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<Edge> GraphState::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.push_back(Edge{static_cast<NodeId>(u), v});
    }
  }
  return out;
}

bool GraphState::collect_ball(NodeId center, std::size_t limit, std::vector<NodeId>& out) {
  if (++visit_epoch_ == 0) {
    std::fill(visit_mark_.begin(), visit_mark_.end(), 0);
    visit_epoch_ = 1;
  }
  out.clear();
  out.push_back(center);
  visit_mark_[center] = visit_epoch_;
  if (out.size() > limit) return false;

  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < locality_.radius; ++depth) {
    const std::size_t level_end = out.size();
    if (level_begin == level_end) break;
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (NodeId nb : adjacency_[out[k]]) {
        if (visit_mark_[nb] == visit_epoch_) continue;
        visit_mark_[nb] = visit_epoch_;
        out.push_back(nb);
        if (out.size() > limit) return false;
      }
    }
    level_begin = level_end;
  }
  return true;
}

void GraphState::store_ball(NodeId i, std::span<const NodeId> ball) {
  NodeId* slot = ball_ids_.data() + static_cast<std::size_t>(i) * ball_stride_;
  std::copy(ball.begin(), ball.end(), slot);
  std::sort(slot, slot + ball.size());
  ball_size_[i] = static_cast<std::uint32_t>(ball.size());
}

void GraphState::mutate_edge(EdgeOp op, Edge edge) {
  const Edge e = Edge::make(edge.u, edge.v);
  check_node(e.u);
  check_node(e.v);
  if (e.u == e.v) throw SelfLoop(e.u);
  const bool present = has_edge(e.u, e.v);

  auto insert_sorted = [](std::vector<NodeId>& adj, NodeId x) {
    adj.insert(std::lower_bound(adj.begin(), adj.end(), x), x);
  };
  auto erase_sorted = [](std::vector<NodeId>& adj, NodeId x) {
    adj.erase(std::lower_bound(adj.begin(), adj.end(), x));
  };

  // Every node whose ball can change lies within distance r of an endpoint,
  // measured in whichever of the old/new graphs contains the edge.
  auto affected_nodes = [&] {
    std::vector<NodeId> affected;
    std::vector<NodeId> ball;
    collect_ball(e.u, kUnbounded, ball);
    affected.insert(affected.end(), ball.begin(), ball.end());
    collect_ball(e.v, kUnbounded, ball);
    affected.insert(affected.end(), ball.begin(), ball.end());
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    return affected;
  };

  if (op == EdgeOp::add) {
    if (present) throw DuplicateEdge(e.u, e.v);
    insert_sorted(adjacency_[e.u], e.v);
    insert_sorted(adjacency_[e.v], e.u);
    const auto affected = affected_nodes();

    std::vector<std::vector<NodeId>> fresh(affected.size());
    for (std::size_t k = 0; k < affected.size(); ++k) {
      if (!collect_ball(affected[k], locality_.cap, fresh[k])) {
        std::vector<NodeId> full;
        collect_ball(affected[k], kUnbounded, full);
        erase_sorted(adjacency_[e.u], e.v);
        erase_sorted(adjacency_[e.v], e.u);
        throw CapViolation(affected[k], full.size(), locality_.cap);
      }
    }
    for (std::size_t k = 0; k < affected.size(); ++k) store_ball(affected[k], fresh[k]);
    ++edge_count_;
  } else {
    if (!present) throw MissingEdge(e.u, e.v);
    const auto affected = affected_nodes();
    erase_sorted(adjacency_[e.u], e.v);
    erase_sorted(adjacency_[e.v], e.u);
    std::vector<NodeId> ball;
    for (NodeId a : affected) {
      collect_ball(a, kUnbounded, ball);
      store_ball(a, ball);
    }
    --edge_count_;
  }
}

std::span<const double> GraphState::state(NodeId i) const {
  check_node(i);
  return state_unchecked(i);
}

void GraphState::set_state(NodeId i, std::span<const double> value) {
  check_node(i);
  if (value.size() != dim_) throw DimensionMismatch(dim_, value.size());
  for (double x : value) {
    if (!std::isfinite(x)) {
      throw NonFiniteInput("non-finite component in state of node " + std::to_string(i));
    }
  }
  std::copy(value.begin(), value.end(), mutable_state_unchecked(i).begin());
}

bool operator==(const GraphState& a, const GraphState& b) {
  if (a.dim_ != b.dim_ || a.locality_.radius != b.locality_.radius ||
      a.locality_.cap != b.locality_.cap || a.adjacency_ != b.adjacency_ ||
      a.ball_size_ != b.ball_size_ || a.states_.size() != b.states_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.adjacency_.size(); ++i) {
    const auto na = a.neighborhood_unchecked(static_cast<NodeId>(i));
    const auto nb = b.neighborhood_unchecked(static_cast<NodeId>(i));
    if (!std::equal(na.begin(), na.end(), nb.begin(), nb.end())) return false;
  }
  return std::equal(a.states_.begin(), a.states_.end(), b.states_.begin(), [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  });
}

GraphState build_graph(const GraphSpec& spec, Locality locality, std::size_t dim) {
  switch (spec.topology) {
    case Topology::ring:
      return GraphState(spec.nodes, ring_edges(spec.nodes), locality, dim);
    case Topology::torus2d:
      return GraphState(spec.width * spec.height, torus_edges(spec.width, spec.height), locality,
                        dim);
    case Topology::random_regular:
      return GraphState(spec.nodes, random_regular_edges(spec.nodes, spec.degree, spec.seed),
                        locality, dim);
    case Topology::edge_list:
      return GraphState(spec.nodes, spec.edges, locality, dim);
  }
  throw InvalidArgument("unknown topology");
}

double block_norm(std::span<const double> x) noexcept {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

void sample_in_ball(SplitMix64& rng, std::span<double> out, bool on_surface) {
  double n = 0.0;
  do {
    for (double& x : out) x = rng.approx_normal();
    n = block_norm(out);
  } while (n == 0.0);
  for (double& x : out) x /= n;
  if (!on_surface) {
    double radius = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) radius = std::max(radius, rng.uniform());
    for (double& x : out) x *= radius;
  }
}

void init_state(GraphState& g, InitKind kind, std::uint64_t seed) {
  std::vector<double> buf(g.dim(), 0.0);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (kind != InitKind::zeros) sample_in_ball(rng, buf, kind == InitKind::surface);
    g.set_state(static_cast<NodeId>(i), buf);
  }
}

std::vector<NodeId> inadmissible_nodes(const GraphState& g) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto id = static_cast<NodeId>(i);
    if (!(block_norm(g.state_unchecked(id)) <= 1.0 + kNormTolerance)) out.push_back(id);
  }
  return out;
}

}  // namespace blgc
