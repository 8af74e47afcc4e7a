#pragma once

#include <cstdint>

namespace qmax {

// SplitMix64 (Steele/Lea); here only to expand seeds into xoshiro state.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ (Blackman/Vigna), 256-bit state, jump-free stream splitting
// done via the seeding scheme below instead.
struct Xoshiro256pp {
  std::uint64_t s[4];

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // 53-bit mantissa uniform in [0,1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Deterministic per-replica generator.  SplitMix64 walks its state in
// increments of the golden-ratio constant, so starting replica r at
// master + 4r*golden and drawing four words hands every replica a disjoint
// block of the SplitMix output sequence: the derivation depends only on
// (master, replica), never on which replica ran first.
inline Xoshiro256pp replica_stream(std::uint64_t master, std::uint64_t replica) {
  SplitMix64 sm(master + 4 * replica * 0x9E3779B97F4A7C15ULL);
  Xoshiro256pp g;
  g.s[0] = sm.next();
  g.s[1] = sm.next();
  g.s[2] = sm.next();
  g.s[3] = sm.next();
  if ((g.s[0] | g.s[1] | g.s[2] | g.s[3]) == 0) g.s[0] = 0x9E3779B97F4A7C15ULL;
  return g;
}

}  // namespace qmax
