#pragma once

// Seeded, allocation-free RNG with identical output on every platform;
// std distributions are avoided because their streams are
// implementation-defined.

#include <cmath>
#include <cstdint>

namespace matdist {

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {  // Box-Muller
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

/// Order-sensitive combination of seeds/indices into a fresh stream seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 s(a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2)));
  s.next();
  return s.next() ^ b;
}

}  // namespace matdist
