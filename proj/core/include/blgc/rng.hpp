#pragma once

#include <cstdint>

namespace blgc {

// SplitMix64 (Steele, Lea & Flood 2014; the seeding generator of xoshiro).
// Every random choice in the library goes through this generator so that a
// seed reproduces the same stream on every platform: only 64-bit integer
// arithmetic is involved, and doubles are built from the top 53 bits.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Uniform integer in [0, bound) by rejection; bound must be non-zero.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  // Approximately standard normal: Irwin-Hall sum of 12 uniforms minus 6.
  // Uses only additions so the value is bit-reproducible without libm.
  constexpr double approx_normal() noexcept {
    double acc = 0.0;
    for (int k = 0; k < 12; ++k) acc += uniform();
    return acc - 6.0;
  }

 private:
  std::uint64_t state_;
};

// Stateless 64-bit mixer (SplitMix64 finalizer) for deriving sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

}  // namespace blgc
