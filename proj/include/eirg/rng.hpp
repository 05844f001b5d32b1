#pragma once

#include <cstdint>

namespace eirg {

/// 64-bit finalizer (Stafford's variant 13, as used by SplitMix64).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// Seed of the independent sub-stream `index` of `parent`.
///
/// Equal to the (index+1)-th output of a SplitMix64 stream started at
/// `parent`, so trial seeds depend only on (master seed, trial index).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(parent + (index + 1) * kGoldenGamma);
}

/// SplitMix64: a counter-based generator. The i-th output (i starting at 1)
/// is mix64(seed + i * golden gamma). This is the pinned generator behind
/// every random draw in the library; its output is identical on every
/// platform with 64-bit unsigned arithmetic.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr result_type operator()() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Bernoulli(p) draw; exact at p = 0 and p = 1.
  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

 private:
  std::uint64_t state_;
};

}  // namespace eirg
