#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sbic {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent generator keyed by a master seed and a tuple of stream
/// coordinates, e.g. (sample size, replicate). Streams do not depend on the
/// order in which they are created.
inline Rng stream_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(master_seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

}  // namespace sbic
