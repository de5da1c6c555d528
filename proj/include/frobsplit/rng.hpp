#pragma once

#include <cstdint>

namespace frobsplit {

/// SplitMix64 (Steele, Lea, Flood).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return v % bound;
  }

  /// Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) noexcept {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Independent stream derived from this generator's seed and a label.
  static SplitMix64 derive(std::uint64_t seed, std::uint64_t label) noexcept {
    SplitMix64 g(seed ^ (label * 0xd1b54a32d192ed03ULL));
    g.next();
    return g;
  }

 private:
  std::uint64_t state_;
};

}  // namespace frobsplit
