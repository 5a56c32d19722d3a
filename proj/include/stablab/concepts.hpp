#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stablab {

/// Hypotheses are stored as 64-bit patterns, which bounds every domain.
inline constexpr std::size_t kMaxDomainSize = 64;

using PointIndex = std::uint32_t;

enum class Label : std::int8_t { minus = -1, plus = 1 };

constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }
constexpr Label flip(Label y) noexcept { return y == Label::plus ? Label::minus : Label::plus; }
constexpr char to_char(Label y) noexcept { return y == Label::plus ? '+' : '-'; }
/// sign(v) with sign(0) = +.
constexpr Label sign_label(double v) noexcept { return v >= 0.0 ? Label::plus : Label::minus; }
/// Parses +1 / -1; anything else is an ArgumentError.
Label label_from_int(long long value);

/// Ordered set of named points. Cheap to copy; copies share storage.
class Domain {
 public:
  Domain();
  explicit Domain(std::vector<std::string> ids);

  /// Points named first, first+1, ..., first+size-1.
  static Domain numbered(std::size_t size, std::size_t first = 1);

  std::size_t size() const noexcept;
  const std::string& id(PointIndex x) const;
  const std::vector<std::string>& ids() const noexcept;
  std::optional<PointIndex> find(const std::string& id) const;
  /// Like find(), but a missing id is a DomainMismatchError.
  PointIndex index_of(const std::string& id) const;

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  struct Storage;
  std::shared_ptr<const Storage> storage_;
};

/// Total map domain -> {-1,+1}, stored as a bit pattern (bit x set iff the
/// label of point x is +).
///
/// The canonical order compares patterns lexicographically in domain order
/// with + before -, so the all-plus hypothesis is always first.
class Hypothesis {
 public:
  constexpr Hypothesis() = default;
  Hypothesis(std::uint64_t plus_mask, std::size_t size);

  static Hypothesis all_plus(std::size_t size);
  static Hypothesis all_minus(std::size_t size);
  static Hypothesis from_labels(std::span<const Label> labels);
  /// Parses a "+-+" pattern string.
  static Hypothesis from_pattern(const std::string& pattern);

  std::size_t size() const noexcept { return size_; }
  std::uint64_t plus_mask() const noexcept { return bits_; }
  Label operator()(PointIndex x) const noexcept {
    return (bits_ >> x) & 1U ? Label::plus : Label::minus;
  }
  Hypothesis with_label(PointIndex x, Label y) const;

  /// "+-+" form in domain order; used as the stable id in reports.
  std::string pattern() const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
  friend std::strong_ordering operator<=>(const Hypothesis& a, const Hypothesis& b) noexcept;

 private:
  std::uint64_t bits_ = 0;
  std::uint32_t size_ = 0;
};

struct HypothesisHash {
  std::size_t operator()(const Hypothesis& h) const noexcept;
};

/// Finite set of distinct hypotheses over a common domain, in a fixed order
/// that every tie-break in the library uses.
class ConceptClass {
 public:
  enum class Ordering { lexicographic, as_given };

  ConceptClass(Domain domain, std::vector<Hypothesis> hypotheses,
               Ordering ordering = Ordering::lexicographic);

  const Domain& domain() const noexcept { return domain_; }
  std::span<const Hypothesis> hypotheses() const noexcept { return hypotheses_; }
  std::size_t size() const noexcept { return hypotheses_.size(); }
  bool empty() const noexcept { return hypotheses_.empty(); }
  const Hypothesis& operator[](std::size_t i) const { return hypotheses_.at(i); }

  bool contains(const Hypothesis& h) const;
  /// Position in the class order, if present.
  std::optional<std::size_t> index_of(const Hypothesis& h) const;

 private:
  Domain domain_;
  std::vector<Hypothesis> hypotheses_;
  std::unordered_map<Hypothesis, std::size_t, HypothesisHash> index_;
};

/// Caps on the brute-force searches; exceeding one is a SizeError.
struct BruteForceLimits {
  std::size_t max_cube_dimension = 16;
  std::size_t max_domain = 20;
  std::size_t max_subset = 12;
  std::size_t max_class_size = 1U << 16;
};

ConceptClass make_cube(std::size_t d, const BruteForceLimits& limits = {});
/// tau_1, ..., tau_t on points 1..t-1 where tau_i(x) = + iff x >= i; kept in
/// index order.
ConceptClass make_thresholds(std::size_t t);
ConceptClass make_singletons(std::size_t s);

std::size_t vc_dimension(const ConceptClass& c, const BruteForceLimits& limits = {});
std::size_t littlestone_dimension(const ConceptClass& c, const BruteForceLimits& limits = {});

/// Largest s <= cap such that some s-subset of the domain carries a pattern
/// missing from the projection whose s Hamming neighbours are all present.
std::size_t hollow_star_number(const ConceptClass& c, std::size_t cap = 10);

/// A hollow star: the subset (in domain order) and its missing centre.
struct HollowStar {
  std::vector<PointIndex> points;
  std::vector<Label> centre;
};

/// First hollow star of exactly `size` points, in lexicographic subset order.
std::optional<HollowStar> find_hollow_star(const ConceptClass& c, std::size_t size);

}  // namespace stablab

template <>
struct std::hash<stablab::Hypothesis> : stablab::HypothesisHash {};
