#pragma once

#include <cstdint>

namespace bmf {

// Seed for every random construction in the library. Identical seed and
// identical parameters produce bit-identical results.
struct RngSeed {
  std::uint64_t value = 0;
};

namespace rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Counter-based stream: the draw at position `counter` is a pure function of
// (seed, counter), so values do not depend on traversal order.
constexpr std::uint64_t at(RngSeed seed, std::uint64_t counter) {
  return mix64(seed.value + (counter + 1) * kGamma);
}

// Uniform double in [0, 1).
inline double unit_halfopen(RngSeed seed, std::uint64_t counter) {
  return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1]; safe as a log() argument.
inline double unit_open(RngSeed seed, std::uint64_t counter) {
  return static_cast<double>((at(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two counter-based uniforms.
double standard_normal(RngSeed seed, std::uint64_t index);

// Independent substream, e.g. one per factor matrix.
constexpr RngSeed substream(RngSeed seed, std::uint64_t stream) {
  return RngSeed{at(seed, stream)};
}

// Per-block seed for tiled runs. Block 0 keeps the parent seed so a 1x1
// grid is bit-identical to the untiled path.
constexpr RngSeed block_seed(RngSeed seed, std::uint64_t block_index) {
  return RngSeed{seed.value + block_index * kGamma};
}

}  // namespace rng
}  // namespace bmf
