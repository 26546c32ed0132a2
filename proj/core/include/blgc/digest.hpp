#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "blgc/graph_state.hpp"

namespace blgc {

// SHA-256 of the canonical snapshot encoding.
struct ReplayDigest {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;
  // Throws FormatError unless given exactly 64 hex digits (surrounding
  // whitespace is ignored).
  static ReplayDigest from_hex(std::string_view text);

  bool operator==(const ReplayDigest&) const = default;
};

ReplayDigest digest_state(const GraphState& g);

}  // namespace blgc
