#pragma once

#include <cstdint>

namespace rittcalc {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// Counter-based generator: the value at (stream, counter) is a pure function of
// the seed, so independent consumers can draw in any order and still get
// reproducible streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed = kDefaultSeed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t counter) const {
    return mix(mix(seed_ ^ mix(stream_)) ^ counter);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  // +1 or -1 with equal probability.
  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Child generator with an independent stream.
  CounterRng split(std::uint64_t tag) const { return CounterRng(seed_, mix(stream_ ^ mix(tag + 1))); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace rittcalc
