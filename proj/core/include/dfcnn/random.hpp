#pragma once

#include <cstdint>

namespace dfcnn {

/**
 * SplitMix64 (Steele, Lea, Flood 2014): draw i is mix(seed + (i + 1) * gamma)
 * with gamma = 0x9E3779B97F4A7C15 and the published mixing constants
 * 0xBF58476D1CE4E5B9 / 0x94D049BB133111EB. Any implementation following
 * these constants reproduces the same stream for a given seed.
 */
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [-bound, bound).
  constexpr double next_symmetric(double bound) noexcept {
    return -bound + 2.0 * bound * next_unit();
  }

 private:
  std::uint64_t state_;
};

}  // namespace dfcnn
