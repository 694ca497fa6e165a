#pragma once

#include <array>
#include <cstdint>

#include "haystack/math.hpp"

// Reproducibility contract: every random quantity in the library is drawn from
// an RngStream whose seed is derived from (master seed, counter) with
// derive_seed below. Replications, and the independent draw streams inside one
// replication, each get their own counter, so results are bit-identical for a
// given seed regardless of how work is scheduled across threads.

namespace haystack {

namespace detail {

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Value of the SplitMix64 stream seeded with `seed` at position `index`.
/// Used as a splittable counter-based seed derivation: nearby (seed, index)
/// pairs land in statistically unrelated states.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return detail::splitmix64_finalize(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// xoshiro256++ with typed draws. Seeded by expanding a 64-bit seed through
/// SplitMix64, per the generator authors' recommendation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t z = seed;
    for (auto& s : state_) {
      z += 0x9E3779B97F4A7C15ULL;
      s = detail::splitmix64_finalize(z);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0,1): (k + 1/2) * 2^-53 for k < 2^53.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by inversion; one uniform consumed per draw, which keeps
  /// stream positions aligned across distributions.
  double standard_normal() { return normal_quantile(uniform()); }

  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace haystack
