#pragma once

#include <cstdint>
#include <random>

namespace tgsketch {

// splitmix64 finalizer; good enough to whiten seed material.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a stream id.
// Used to give every parallel task its own generator so results do not
// depend on the number of worker threads.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt = 0) {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ salt);
}

using rng_engine = std::mt19937_64;

// Uniform double in [0, 1).
inline double uniform01(rng_engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_index(rng_engine& rng, std::uint64_t n) {
  // Modulo bias is negligible for n << 2^64.
  return rng() % n;
}

}  // namespace tgsketch
