#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace relkmeans {

/// Counter-based 64-bit generator. Output n is the SplitMix64 finalizer applied
/// to `key + n * golden`, so a stream is fully determined by (key, counter) and
/// independent streams are derived with `fork`. The output sequence is part of
/// the reproducibility contract: do not change it without bumping the release.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed ^ kSeedSalt)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Child stream keyed by `stream`; does not advance this generator.
  CounterRng fork(std::uint64_t stream) const noexcept {
    return CounterRng(key_, mix(stream + kGolden) ^ kForkSalt);
  }

  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  CounterRng(std::uint64_t parent_key, std::uint64_t tweak) noexcept
      : key_(mix(parent_key ^ tweak)) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kSeedSalt = 0x5DEECE66DULL;
  static constexpr std::uint64_t kForkSalt = 0xD1B54A32D192ED03ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection of the biased low region.
  while (true) {
    __extension__ using wide = unsigned __int128;
    const wide m = static_cast<wide>((*this)()) * n;
    const auto low = static_cast<std::uint64_t>(m);
    if (low >= n || low >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

/// Draws an index with probability proportional to `weights[i]`. Nonpositive
/// entries are never returned. Returns weights.size() when the total is not
/// positive.
std::size_t sample_weighted(std::span<const double> weights, CounterRng& rng);

}  // namespace relkmeans
