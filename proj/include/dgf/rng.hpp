#pragma once

#include <cstdint>
#include <random>

namespace dgf {

// SplitMix64 finalizer. Used for seed derivation and coverage slot hashing.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent deterministic engine for stream `tag` of a campaign seed.
// Distinct tags give uncorrelated streams from the same base seed.
inline std::mt19937_64 make_stream(std::uint64_t base, std::uint64_t tag) {
  return std::mt19937_64(mix64(base ^ mix64(tag)));
}

// One engine draw reduced modulo n (n > 0). The modulo keeps draws portable
// across standard libraries; the bias is below 2^-32 for any n we use.
inline std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

// Uniform double in [0, 1) from one draw (53-bit mantissa).
inline double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace dgf
