#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stomatch {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a stream seed from a master seed and a path of ids
/// (trial, round, ...). Distinct paths give statistically independent
/// streams; the mapping is stable across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t id : path) {
    h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(master, path));
}

/// Uniform double in [0, 1) from the top 53 bits; unlike
/// std::uniform_real_distribution the sequence is the same on every
/// standard library, which keeps reports byte-identical across toolchains.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
  return uniform01(rng) < p;
}

/// Uniform integer in [0, bound). Lemire's multiply-shift, bias below 2^-64 * bound.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

}  // namespace stomatch
