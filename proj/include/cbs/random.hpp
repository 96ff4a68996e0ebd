#pragma once

#include <cstdint>
#include <random>

namespace cbs {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives the seed of an independent stream from (seed, stream id, counter).
/// Every randomized routine draws per-trial or per-chunk engines from this so
/// that results do not depend on how work is scheduled across threads.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter = 0) noexcept {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t counter = 0) {
  return Engine{stream_seed(seed, stream, counter)};
}

}  // namespace cbs
