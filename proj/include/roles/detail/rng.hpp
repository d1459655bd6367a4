#pragma once

#include <cstdint>
#include <random>

namespace roles::detail {

// The library's only random engine is std::mt19937_64; its output sequence
// is fixed by the standard, so seeded runs are reproducible across standard
// libraries as long as we avoid the (implementation-defined) distributions.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection, bound > 0.
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// SplitMix64 finalizer; used to derive decorrelated child seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace roles::detail
