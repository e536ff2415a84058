#pragma once

#include <cstdint>

namespace tracesim {

// SplitMix64: small, fast, and stable across platforms. We avoid
// <random> distributions because their output is not pinned by the
// standard, and experiment outputs must be reproducible byte-for-byte.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) via 128-bit multiply; unbiased enough for
  // simulation purposes and branch-free.
  uint64_t next_below(uint64_t bound) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool next_bool(double p) { return next_double() < p; }

  // Derive an independent stream; used to split one run seed into
  // per-component seeds without correlation.
  SplitMix64 split() { return SplitMix64(next() ^ 0x5851f42d4c957f2dull); }

 private:
  uint64_t state_;
};

// Stable 64-bit string hash (FNV-1a) for seeding from names.
inline uint64_t hash_name(const char* s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (; *s; ++s) {
    h ^= static_cast<uint8_t>(*s);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace tracesim
