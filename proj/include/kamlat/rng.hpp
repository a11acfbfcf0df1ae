#ifndef KAMLAT_RNG_HPP
#define KAMLAT_RNG_HPP

#include <cstdint>

namespace kamlat::rng {

// Counter-based splittable generator (splitmix64 finalizer chain). Every draw
// is a pure function of (seed, stream, counter), so sampling is reproducible
// across platforms and trivially parallel over disjoint counter ranges.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash3(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
  h = splitmix64(h ^ stream * 0x13198a2e03707344ULL);
  h = splitmix64(h ^ counter * 0xa4093822299f31d0ULL);
  return h;
}

/// Uniform double in [0, 1).
inline double uniform01(uint64_t seed, uint64_t stream, uint64_t counter) {
  return static_cast<double>(hash3(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform double in [a, b).
inline double uniform(uint64_t seed, uint64_t stream, uint64_t counter, double a,
                      double b) {
  return a + (b - a) * uniform01(seed, stream, counter);
}

// Fixed stream tags per purpose.
inline constexpr uint64_t kStreamFrequencySample = 1;
inline constexpr uint64_t kStreamMeasure = 2;
inline constexpr uint64_t kStreamXiJitter = 3;
inline constexpr uint64_t kStreamTest = 100;

}  // namespace kamlat::rng

#endif
