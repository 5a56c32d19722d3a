#include "stablab/seed.hpp"

#include <cmath>

namespace stablab {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kIndexSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kTagSalt = 0x8CB92BA72F3D8DD7ULL;

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

SeedKey SeedKey::child(std::uint64_t index) const noexcept {
  return SeedKey{mix64(mix64(value_ ^ kIndexSalt) + kGoldenGamma * (index + 1))};
}

SeedKey SeedKey::child(std::string_view tag) const noexcept {
  return SeedKey{mix64(mix64(value_ ^ kTagSalt) ^ mix64(fnv1a(tag)))};
}

SplitMix64::result_type SplitMix64::operator()() noexcept {
  state_ += kGoldenGamma;
  return mix64(state_);
}

double uniform01(SplitMix64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) noexcept {
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

double exponential1(SplitMix64& rng) noexcept {
  return -std::log1p(-uniform01(rng));
}

}  // namespace stablab
