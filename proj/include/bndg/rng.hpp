#pragma once

// Counter-based splitmix64 streams. Draw k of stream (seed, index) is a pure
// function of (seed, index, k), so results do not depend on platform
// distribution implementations or on evaluation order.

#include <cstdint>
#include <span>

#include "bndg/error.hpp"
#include "bndg/rational.hpp"

namespace bndg {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t index) noexcept : key_(splitmix64(seed ^ splitmix64(index))) {}

  std::uint64_t next() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * counter_++); }

  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::invalid_argument, "empty range");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  /// Index drawn with exact rational weights summing to 1.
  std::size_t pick(std::span<const Rational> probs) {
    std::int64_t scale = 1;
    for (const auto& p : probs) scale = detail::lcm64(scale, p.den());
    std::uint64_t u = below(static_cast<std::uint64_t>(scale));
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      acc += static_cast<std::uint64_t>(probs[k].num() * (scale / probs[k].den()));
      if (u < acc) return k;
    }
    return probs.size() - 1;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bndg
