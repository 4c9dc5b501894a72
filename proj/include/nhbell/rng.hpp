#pragma once

#include <cstdint>

namespace nhbell {

// splitmix64: 64-bit state, one multiply-xorshift pipeline per draw. Chosen
// because the whole sequence is a pure function of the seed, identical on
// every platform, and trivially splittable into independent streams (stream k
// reseeds through the same mixer), which keeps multi-restart searches and
// sweeps reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Independent child stream; mixing the index through next() decorrelates
  // consecutive streams.
  static SplitMix64 split(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace nhbell
