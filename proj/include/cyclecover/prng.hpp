#pragma once

#include <cstdint>

namespace cyclecover {

// Splittable counter-based generator (splitmix64). All randomized machinery
// in the library (PMU sampling, benchmark trial seeds) goes through this so
// that results are reproducible bit-for-bit across platforms for a fixed
// 64-bit seed, independent of the standard library's <random> distributions.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) via multiply-shift. Deterministic and
  // platform independent; the residual bias is below 2^-64 * bound.
  std::uint64_t bounded(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  // Uniform double in [0, 1).
  double next_unit() { return (next() >> 11) * 0x1.0p-53; }

  // Derive an independent stream, e.g. one per benchmark trial.
  SplitMix64 split(std::uint64_t stream) {
    SplitMix64 mixer(state ^ (0x2545f4914f6cdd1dULL * (stream + 1)));
    return SplitMix64(mixer.next());
  }
};

}  // namespace cyclecover
