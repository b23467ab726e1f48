#pragma once

#include <cstdint>

namespace irerm {

// Counter-based stream: splitmix64 applied to an incrementing counter.
// One stream per run; every estimate call advances it, so estimates drawn
// at the same point with the same stream are distinct realizations while a
// rerun with the same seed replays the identical sequence bit for bit.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : counter_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (counter_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [-half, half).
  double next_symmetric(double half) { return half * (2.0 * next_unit() - 1.0); }

  // Unbiased uniform integer in [0, bound), bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t counter_;
};

}  // namespace irerm
