#pragma once

#include <cmath>
#include <cstdint>

namespace edgenav {

// Counter-based pseudo-random draws. Consumers key every draw by an explicit
// (seed, counter, stream) tuple, so results never depend on call order and a
// given frame always sees the same noise no matter how the caller iterates.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t k = mix64(seed);
  k = mix64(k ^ a);
  k = mix64(k ^ b);
  k = mix64(k ^ c);
  return k;
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two sub-draws of the key.
inline double normal01(std::uint64_t key) {
  const double u1 =
      (static_cast<double>(mix64(key ^ 0xa5a5a5a5a5a5a5a5ULL) >> 11) + 1.0) *
      0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(mix64(key ^ 0x5a5a5a5a5a5a5a5aULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace edgenav
