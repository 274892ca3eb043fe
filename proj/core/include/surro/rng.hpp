#pragma once

#include <cstdint>
#include <random>

namespace surro {

/// splitmix64 step; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// Independent stream for a (seed, lane, index) triple. Replicate b of a
/// bootstrap uses stream(seed, lane, b); subject i of a simulation uses
/// stream(seed, lane', i). Parallel and serial execution therefore consume
/// identical randomness.
inline Rng make_stream(std::uint64_t seed, std::uint64_t lane, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= lane * 0xda942042e4dd58b5ULL;
  std::uint64_t b = splitmix64(s);
  s ^= index * 0x2545f4914f6cdd1dULL;
  std::uint64_t c = splitmix64(s);
  Rng rng(a ^ (b << 1) ^ (c << 2));
  rng.discard(8);
  return rng;
}

namespace rng_lane {
inline constexpr std::uint64_t kSimulateSubject = 11;
inline constexpr std::uint64_t kBootstrapReplicate = 23;
inline constexpr std::uint64_t kNullDraw = 31;
inline constexpr std::uint64_t kTrajectory = 47;
}  // namespace rng_lane

}  // namespace surro
