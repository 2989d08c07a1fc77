#pragma once

#include <cstdint>

namespace fdsched {

// SplitMix64 finalizer: full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Stateless counter generator: each draw is a pure function of
// (seed, stream, counter), so any position of any stream can be produced
// independently. Parallel and serial execution plans therefore consume
// identical randomness.
inline std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  std::uint64_t h = mix64(seed ^ 0x9E3779B97F4A7C15ULL);
  h = mix64(h ^ (stream * 0xC2B2AE3D27D4EB4FULL + 0x165667B19E3779F9ULL));
  h = mix64(h ^ (counter * 0x9E3779B97F4A7C15ULL + 0xD6E8FEB86659FD93ULL));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Independent sub-seed for a tagged purpose (per probe, per sample, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return counter_draw(seed, tag, index);
}

// Stream tags; keeps purposes from colliding on the same counter values.
namespace streams {
inline constexpr std::uint64_t kArrivals = 0x41;
inline constexpr std::uint64_t kGroupAssignment = 0x47;
inline constexpr std::uint64_t kCdfSample = 0x53;
inline constexpr std::uint64_t kSeedSequence = 0x5A;
}  // namespace streams

}  // namespace fdsched
