#pragma once

#include <cstdint>

namespace flrw {

/// Counter-based generator: the value at a counter depends only on
/// (seed, stream, counter), so streams are reproducible across platforms and
/// independent of evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform in [0, 1).
  double uniform(std::uint64_t counter) const;
  /// Uniform in [lo, hi).
  double uniform(std::uint64_t counter, double lo, double hi) const;
  /// Standard normal via Box-Muller on counters 2k and 2k+1.
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace flrw
