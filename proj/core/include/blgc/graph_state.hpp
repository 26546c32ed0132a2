#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blgc/rng.hpp"

namespace blgc {

// Dense node index in [0, M). Nodes are never removed, so ids are never reused.
using NodeId = std::uint32_t;

// Slack allowed on stored state norms (||s_i|| <= 1 + kNormTolerance).
inline constexpr double kNormTolerance = 1e-12;

// Undirected edge stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge make(NodeId a, NodeId b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

enum class Topology { ring, torus2d, random_regular, edge_list };

struct GraphSpec {
  Topology topology = Topology::ring;
  std::size_t nodes = 0;   // ring, random_regular, edge_list
  std::size_t width = 0;   // torus2d
  std::size_t height = 0;  // torus2d
  std::size_t degree = 0;  // random_regular
  std::vector<Edge> edges;  // edge_list
  std::uint64_t seed = 0;   // random_regular

  static GraphSpec ring(std::size_t nodes);
  static GraphSpec torus(std::size_t width, std::size_t height);
  static GraphSpec random_regular(std::size_t nodes, std::size_t degree, std::uint64_t seed);
  static GraphSpec edge_list(std::size_t nodes, std::vector<Edge> edges);

  std::size_t node_count() const noexcept;
};

struct Locality {
  std::size_t radius = 1;  // r >= 1
  std::size_t cap = 1;     // D >= 1, counts the node itself
};

enum class EdgeOp { add, remove };

enum class InitKind { zeros, uniform_ball, surface };

// Dynamic graph plus per-node bounded state vectors.
//
// Every node's radius-r ball N_r(i) (including i) is cached in ascending id
// order and kept consistent across edge mutations, so a lookup is O(D). The
// cap |N_r(i)| <= D is enforced whenever the edge set changes: construction
// fails and mutations are rejected atomically.
class GraphState {
 public:
  GraphState(std::size_t nodes, std::span<const Edge> edges, Locality locality,
             std::size_t dim);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t radius() const noexcept { return locality_.radius; }
  std::size_t cap() const noexcept { return locality_.cap; }
  const Locality& locality() const noexcept { return locality_; }

  bool contains(NodeId i) const noexcept { return i < adjacency_.size(); }

  // N_r(i) in ascending id order. Throws UnknownNode.
  std::span<const NodeId> neighborhood(NodeId i) const;
  std::span<const NodeId> neighborhood_unchecked(NodeId i) const noexcept {
    return {ball_ids_.data() + static_cast<std::size_t>(i) * ball_stride_, ball_size_[i]};
  }
  std::size_t max_neighborhood_size() const noexcept;

  std::span<const NodeId> adjacent(NodeId i) const;
  bool has_edge(NodeId a, NodeId b) const;
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::vector<Edge> edges() const;

  // Throws UnknownNode, SelfLoop, DuplicateEdge / MissingEdge, CapViolation.
  void mutate_edge(EdgeOp op, Edge edge);
  void add_edge(NodeId a, NodeId b) { mutate_edge(EdgeOp::add, Edge::make(a, b)); }
  void remove_edge(NodeId a, NodeId b) { mutate_edge(EdgeOp::remove, Edge::make(a, b)); }

  std::span<const double> state(NodeId i) const;
  std::span<const double> state_unchecked(NodeId i) const noexcept {
    return {states_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  std::span<double> mutable_state_unchecked(NodeId i) noexcept {
    return {states_.data() + static_cast<std::size_t>(i) * dim_, dim_};
  }
  // Validates length and finiteness; norms are not enforced here so that a
  // loaded snapshot can be inspected by the verifier.
  void set_state(NodeId i, std::span<const double> value);
  std::span<const double> states() const noexcept { return states_; }

  // Structural and bitwise state equality (scratch buffers excluded).
  friend bool operator==(const GraphState& a, const GraphState& b);

 private:
  void check_node(NodeId i) const;
  // BFS to depth r from `center`. Returns false as soon as more than `limit`
  // nodes are collected. `out` receives the ball in BFS order.
  bool collect_ball(NodeId center, std::size_t limit, std::vector<NodeId>& out);
  void store_ball(NodeId i, std::span<const NodeId> ball);

  std::size_t dim_;
  Locality locality_;
  std::vector<std::vector<NodeId>> adjacency_;  // each list sorted
  std::size_t edge_count_ = 0;

  std::size_t ball_stride_ = 0;
  std::vector<NodeId> ball_ids_;
  std::vector<std::uint32_t> ball_size_;

  std::vector<double> states_;

  // BFS scratch; epoch-stamped visit marks avoid clearing O(M) per search.
  std::vector<std::uint32_t> visit_mark_;
  std::uint32_t visit_epoch_ = 0;
};

GraphState build_graph(const GraphSpec& spec, Locality locality, std::size_t dim);

inline std::span<const NodeId> neighborhood(const GraphState& g, NodeId i) {
  return g.neighborhood(i);
}

inline void mutate_edge(GraphState& g, EdgeOp op, Edge edge) { g.mutate_edge(op, edge); }

// Deterministic initial states: same (kind, seed, d, M) gives the same bits.
//  zeros         every state is the zero vector
//  uniform_ball  uniform radius law (max of d uniforms has CDF r^d) times an
//                approximately isotropic direction
//  surface       the same direction with unit length
void init_state(GraphState& g, InitKind kind, std::uint64_t seed);

double block_norm(std::span<const double> x) noexcept;

// Draws one vector into `out`: approximately isotropic direction (normalized
// Irwin-Hall normals), scaled by max-of-d uniforms unless `on_surface`.
void sample_in_ball(SplitMix64& rng, std::span<double> out, bool on_surface);

// Nodes whose stored state exceeds 1 + kNormTolerance, ascending.
std::vector<NodeId> inadmissible_nodes(const GraphState& g);

}  // namespace blgc
