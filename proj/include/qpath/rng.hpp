#pragma once

#include <cstdint>

namespace qpath {

/// SplitMix64 counter-style generator. Cheap to seed, full 64-bit state,
/// passes BigCrush; good enough for inverse-CDF sampling of categorical
/// distributions and for test-data generation.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent stream for (seed, index). The start state is an avalanche
  /// mix of both words, so streams for consecutive indices do not overlap
  /// the way `seed + index * gamma` would. Workers drawing shot k from
  /// stream(seed, k) produce identical results for any scheduling.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed);
    std::uint64_t a = mixer.next();
    mixer.state ^= index * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = mixer.next();
    return SplitMix64(a ^ (b + 0x632be59bd9b4e019ULL));
  }
};

}  // namespace qpath
