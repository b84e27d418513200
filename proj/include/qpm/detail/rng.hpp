// detail/rng.hpp
// Small counter-friendly PRNG. A stream is derived from a (seed, counter)
// pair, so work split across threads reproduces the single-threaded
// sequence exactly regardless of scheduling.

#pragma once

#include <cstdint>

namespace qpm::detail {

// splitmix64 finalizer; also used to scramble seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  // Independent stream for the given counter value under a fixed seed.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t counter) {
    return SplitMix64(mix64(seed) ^ mix64(counter + 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]; never returns zero, so normalized draws stay finite.
  double uniform_pos() {
    return static_cast<double>((next() >> 12) + 1) * 0x1.0p-52;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace qpm::detail
