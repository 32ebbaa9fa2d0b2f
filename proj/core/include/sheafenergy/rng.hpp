#ifndef SHEAFENERGY_RNG_HPP
#define SHEAFENERGY_RNG_HPP

#include <cstdint>

namespace sheafenergy {

/// Counter-based generator: value(i) = splitmix64(seed + i). One 64-bit
/// seed fully determines every randomized sequence in the toolkit, with
/// identical streams on every platform (see docs/determinism.md).
class CounterRng {
public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t next_u64() {
    uint64_t z = seed_ + 0x9e3779b97f4a7c15ull * ++counter_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  uint64_t counter() const { return counter_; }

private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace sheafenergy

#endif
