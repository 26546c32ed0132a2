#include "blgc/errors.hpp"

namespace blgc {

UnknownNode::UnknownNode(std::uint64_t node)
    : Error("unknown node " + std::to_string(node)), node_(node) {}

ConstructionViolatesCap::ConstructionViolatesCap(std::uint64_t node, std::size_t size,
                                                 std::size_t cap)
    : Error("graph construction violates neighborhood cap: node " + std::to_string(node) +
            " has |N_r| = " + std::to_string(size) + " > D = " + std::to_string(cap)),
      node_(node),
      size_(size) {}

CapViolation::CapViolation(std::uint64_t node, std::size_t size, std::size_t cap)
    : Error("edge mutation rejected: node " + std::to_string(node) + " would have |N_r| = " +
            std::to_string(size) + " > D = " + std::to_string(cap)),
      node_(node),
      size_(size) {}

DuplicateEdge::DuplicateEdge(std::uint64_t u, std::uint64_t v)
    : Error("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") already present") {}

MissingEdge::MissingEdge(std::uint64_t u, std::uint64_t v)
    : Error("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") not present") {}

SelfLoop::SelfLoop(std::uint64_t node)
    : Error("self-loop on node " + std::to_string(node) + " is not allowed") {}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

MonitorViolation::MonitorViolation(std::uint64_t step, std::uint64_t node,
                                   const std::string& what)
    : Error("monitor violation at step " + std::to_string(step) + ", node " +
            std::to_string(node) + ": " + what),
      step_(step),
      node_(node) {}

}  // namespace blgc
