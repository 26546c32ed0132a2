#include "blgc/digest.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <memory>

#include "blgc/errors.hpp"
#include "blgc/snapshot.hpp"

namespace blgc {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const noexcept { EVP_MD_CTX_free(ctx); }
};

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ReplayDigest::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

ReplayDigest ReplayDigest::from_hex(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  if (text.size() != 64) throw FormatError("digest must be 64 hex digits");
  ReplayDigest d;
  for (std::size_t k = 0; k < 32; ++k) {
    const int hi = hex_value(text[2 * k]);
    const int lo = hex_value(text[2 * k + 1]);
    if (hi < 0 || lo < 0) throw FormatError("digest contains a non-hex character");
    d.bytes[k] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return d;
}

ReplayDigest digest_state(const GraphState& g) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  stream_snapshot(g, [&](std::span<const std::uint8_t> chunk) {
    EVP_DigestUpdate(ctx.get(), chunk.data(), chunk.size());
  });
  ReplayDigest d;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), d.bytes.data(), &len) != 1 || len != d.bytes.size()) {
    throw Error("SHA-256 finalisation failed");
  }
  return d;
}

}  // namespace blgc
