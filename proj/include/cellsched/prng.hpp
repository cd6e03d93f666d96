#ifndef CELLSCHED_PRNG_HPP
#define CELLSCHED_PRNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cellsched {

/// SplitMix64. Fixed algorithm so that seeded generation is reproducible
/// across platforms and standard-library versions.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi_inclusive - lo + 1));
  }

  /// Standard normal via Box-Muller (one sample per call, two uniforms drawn).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Derives an independent stream from (seed, k1, k2). Streams for distinct
/// keys never share state, which keeps per-cell / per-user draws stable when
/// unrelated parts of the configuration change.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2 = 0) {
  std::uint64_t s = detail::mix64(seed ^ 0xA3EC647659359ACDull);
  s = detail::mix64(s ^ (k1 + 0x9E3779B97F4A7C15ull));
  s = detail::mix64(s ^ (k2 + 0xD1B54A32D192ED03ull));
  return SplitMix64(s);
}

}  // namespace cellsched

#endif  // CELLSCHED_PRNG_HPP
