#pragma once

#include <cstdint>
#include <random>

namespace edc {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to decorrelate derived stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class StreamKind : std::uint64_t { Grouping = 1, Sampling = 2 };

/// Seed of the child stream keyed by (generation, kind, index) under a run seed.
/// Child streams never depend on how much of the master stream was consumed,
/// so per-group work can run in any order.
constexpr std::uint64_t child_seed(std::uint64_t run_seed, std::uint64_t generation,
                                   StreamKind kind, std::uint64_t index = 0) {
  std::uint64_t h = splitmix64(run_seed);
  h = splitmix64(h ^ generation);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return splitmix64(h ^ index);
}

inline Rng child_stream(std::uint64_t run_seed, std::uint64_t generation, StreamKind kind,
                        std::uint64_t index = 0) {
  return Rng(child_seed(run_seed, generation, kind, index));
}

}  // namespace edc
