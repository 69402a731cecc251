#ifndef SQPSIM_SIM_RANDOM_H_
#define SQPSIM_SIM_RANDOM_H_

#include <cstdint>

namespace sqpsim {

// SplitMix64 (Steele, Lea, Flood). The state advances by 0x9E3779B97F4A7C15
// and the output is mixed with multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB and shifts 30, 27, 31. Any implementation using these
// constants reproduces the same stream for the same seed.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound]. Uses plain modulo so the mapping is
  // trivial to reproduce elsewhere.
  uint64_t UniformInclusive(uint64_t bound) {
    return bound == UINT64_MAX ? Next() : Next() % (bound + 1);
  }

  // Uniform double in [0, 1) from the top 53 bits.
  double UniformUnit() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  // Independent stream for a sub-component, derived deterministically.
  SplitMix64 Fork(uint64_t salt) {
    return SplitMix64(Next() ^ (salt * 0xD1B54A32D192ED03ULL));
  }

 private:
  uint64_t state_;
};

}  // namespace sqpsim

#endif  // SQPSIM_SIM_RANDOM_H_
