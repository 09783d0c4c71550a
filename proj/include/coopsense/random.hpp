#pragma once

#include <cstdint>
#include <random>

namespace coopsense {

using RngStream = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream `index` under `master`. Substreams with distinct
/// indices are treated as independent; index i belongs to worker/event i.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline RngStream substream(std::uint64_t master, std::uint64_t index) {
  return RngStream(derive_seed(master, index));
}

/// Uniform double in the open interval (0, 1) from the top 53 bits.
inline double uniform_open(RngStream& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace coopsense
