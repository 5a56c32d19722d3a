#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace stablab {

/// Node in a hierarchical seed tree. Children are derived by hashing, so any
/// trial's randomness is a pure function of (experiment seed, path), which
/// lets trials run in any order or on any thread.
class SeedKey {
 public:
  constexpr SeedKey() = default;
  constexpr explicit SeedKey(std::uint64_t value) : value_(value) {}

  SeedKey child(std::uint64_t index) const noexcept;
  SeedKey child(std::string_view tag) const noexcept;

  constexpr std::uint64_t value() const noexcept { return value_; }
  friend constexpr bool operator==(SeedKey, SeedKey) = default;

 private:
  std::uint64_t value_ = 0;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based generator: output i is mix64(key + i * golden gamma).
/// Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(SeedKey key) noexcept : state_(key.value()) {}

  result_type operator()() noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t state_;
};

// Portable distributions. The standard library's distribution objects are
// implementation-defined, which would break cross-platform reproducibility.

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(SplitMix64& rng) noexcept;

/// Uniform integer in [0, bound); bound must be positive.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) noexcept;

/// Exponential(1) variate.
double exponential1(SplitMix64& rng) noexcept;

}  // namespace stablab
