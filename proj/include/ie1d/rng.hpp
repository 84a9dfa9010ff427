// Deterministic PRNG used everywhere randomness is needed.
//
// xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D), seeded through
// one round of splitmix64 so that small seeds produce well-mixed states.
// All constants are fixed; the same seed yields the same stream on every
// platform.
#pragma once

#include <cstdint>

namespace ie1d {

class Xorshift64Star {
  public:
    explicit Xorshift64Star(std::uint64_t seed) {
        // splitmix64 round
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    std::uint64_t state_;
};

}  // namespace ie1d
