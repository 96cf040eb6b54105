#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pasx {

/// SplitMix64. Small, fast, and fully portable: simulation outputs must be
/// bit-identical across platforms, which rules out the std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via rejection, bias-free.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::next_below: bound must be positive");
    const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Independent stream keyed by (seed, tag, index, subindex). Streams for
/// distinct keys never depend on evaluation order, which makes experiment
/// results schedule-independent.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0,
                      std::uint64_t subindex = 0) {
  std::uint64_t s = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
  s = detail::mix64(s ^ (tag * 0xD1342543DE82EF95ULL));
  s = detail::mix64(s ^ (index * 0xAF251AF3B0F025B5ULL));
  s = detail::mix64(s ^ (subindex * 0x9E6C63D0876A9A63ULL));
  return Rng(s);
}

/// Sample an index from cumulative-free weights by CDF inversion.
inline std::uint32_t sample_index(Rng& rng, const std::vector<double>& probs) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<std::uint32_t>(i);
  }
  return static_cast<std::uint32_t>(probs.size() - 1);
}

}  // namespace pasx
