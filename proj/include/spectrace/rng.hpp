#pragma once

#include <cstdint>
#include <limits>

namespace spectrace {

/// SplitMix64 generator. Satisfies
/// UniformRandomBitGenerator; split() derives an independent stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  SplitMix64 split() { return SplitMix64((*this)() ^ 0x6A09E667F3BCC909ULL); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; one draw per call.
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace spectrace
