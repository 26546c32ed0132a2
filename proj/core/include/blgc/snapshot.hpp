#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "blgc/graph_state.hpp"

namespace blgc {

// Binary snapshot layout, all integers and floats little-endian:
//
//   "BLGC1"                      5-byte magic, no terminator
//   M, d, r, D                   uint64 each
//   states                       M * d IEEE-754 binary64, ascending node id
//   edges                        (u, v) uint64 pairs with u < v, ascending,
//                                until end of file
//
// Encoding is canonical: equal GraphStates produce identical bytes.
inline constexpr std::string_view kSnapshotMagic = "BLGC1";

using ByteSink = std::function<void(std::span<const std::uint8_t>)>;

// Feeds the canonical encoding to `sink` in bounded chunks.
void stream_snapshot(const GraphState& g, const ByteSink& sink);

std::vector<std::uint8_t> encode_snapshot(const GraphState& g);

// Throws FormatError on malformed input; graph construction errors
// (ConstructionViolatesCap etc.) propagate. States are not norm-checked.
GraphState decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const GraphState& g, const std::filesystem::path& path);
GraphState read_snapshot(const std::filesystem::path& path);

}  // namespace blgc
