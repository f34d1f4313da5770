#pragma once

#include <cmath>
#include <cstdint>

#include "sns/types.hpp"

namespace sns {

// Counter-based generation: every variate is a pure function of the inputs,
// so shifted/negative-time streams are plain index arithmetic.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t counter_hash(uint64_t seed, uint64_t stream, int64_t counter, uint64_t key) {
  uint64_t h = splitmix64(seed ^ 0xA0761D6478BD642Full);
  h          = splitmix64(h ^ stream);
  h          = splitmix64(h ^ static_cast<uint64_t>(counter));
  h          = splitmix64(h ^ key);
  return h;
}

inline double uniform01(uint64_t bits) {
  // strictly inside (0,1)
  return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

// One standard complex pair (independent N(0,1) real and imaginary parts).
inline Complex gaussian_pair(uint64_t seed, uint64_t stream, int64_t counter, uint64_t key) {
  const double u1 = uniform01(counter_hash(seed, stream, counter, key));
  const double u2 = uniform01(counter_hash(seed, stream + 1, counter, key));
  const double r  = std::sqrt(-2.0 * std::log(u1));
  return Complex(r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2));
}

inline uint64_t mode_key(int l, int m) {
  return (uint64_t(uint32_t(l)) << 32) | uint32_t(int32_t(m) + (1 << 20));
}

// Documented splitting rule for ensembles: member seeds are
// splitmix64(seed XOR splitmix64(index + 1)).
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 1));
}

}  // namespace sns
