#pragma once

#include <cstdint>
#include <random>

namespace iab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer over (seed, stream). Every randomized operation takes a
// base seed and derives its own stream from it, so results are pure functions
// of (inputs, seed).
constexpr std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(MixSeed(seed, stream));
}

// Stream tags keep the independent consumers of one seed apart.
namespace streams {
inline constexpr std::uint64_t kTopology = 1;
inline constexpr std::uint64_t kPerturbation = 2;
inline constexpr std::uint64_t kFading = 3;
inline constexpr std::uint64_t kResetAction = 4;
inline constexpr std::uint64_t kNetworkInit = 5;
inline constexpr std::uint64_t kPolicy = 6;
inline constexpr std::uint64_t kReplay = 7;
inline constexpr std::uint64_t kEpisode = 8;
}  // namespace streams

}  // namespace iab
