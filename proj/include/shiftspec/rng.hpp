#pragma once

#include <cstdint>

namespace shiftspec {

// splitmix64, used only to turn (seed, sample index) into a starting state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// xorshift64*: shifts (12, 25, 27), multiplier 0x2545F4914F6CDD1D.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ULL) {}

  // Independent stream for sample `index` of a run seeded by `seed`.
  static XorShift64Star for_sample(std::uint64_t seed, std::uint64_t index) {
    return XorShift64Star(splitmix64(seed ^ splitmix64(index + 1)));
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace shiftspec
