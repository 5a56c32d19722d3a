#include "stablab/concepts.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "concepts";

std::uint64_t low_mask(std::size_t size) {
  return size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
}

// Next k-subset of an n-bit universe in increasing numeric order (Gosper).
std::uint64_t next_subset(std::uint64_t s) {
  const std::uint64_t c = s & (~s + 1);
  const std::uint64_t r = s + c;
  return (((r ^ s) >> 2) / c) | r;
}

template <typename Visit>
bool for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k == 0 || k > n) return false;
  if (n >= 64) throw SizeError(kModule, "subset enumeration over more than 63 points");
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s = low_mask(k); s < limit; s = next_subset(s)) {
    if (visit(s)) return true;
    if (k == n) break;
  }
  return false;
}

std::vector<PointIndex> mask_points(std::uint64_t mask) {
  std::vector<PointIndex> points;
  while (mask != 0) {
    points.push_back(static_cast<PointIndex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return points;
}

// Index of h's labels on `points` as a |points|-bit number (bit i = + on points[i]).
std::size_t project(const Hypothesis& h, std::span<const PointIndex> points) {
  std::size_t code = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (h(points[i]) == Label::plus) code |= std::size_t{1} << i;
  }
  return code;
}

std::vector<std::uint8_t> projection_table(const ConceptClass& c,
                                           std::span<const PointIndex> points) {
  std::vector<std::uint8_t> present(std::size_t{1} << points.size(), 0);
  for (const auto& h : c.hypotheses()) present[project(h, points)] = 1;
  return present;
}

}  // namespace

Label label_from_int(long long value) {
  if (value == 1) return Label::plus;
  if (value == -1) return Label::minus;
  throw ArgumentError(kModule, "label must be +1 or -1, got " + std::to_string(value));
}

// ---------------------------------------------------------------------------
// Domain

struct Domain::Storage {
  std::vector<std::string> ids;
  std::unordered_map<std::string, PointIndex> index;
};

Domain::Domain() : Domain(std::vector<std::string>{}) {}

Domain::Domain(std::vector<std::string> ids) {
  if (ids.size() > kMaxDomainSize) {
    throw SizeError(kModule, "domain of " + std::to_string(ids.size()) +
                                 " points exceeds the supported maximum of " +
                                 std::to_string(kMaxDomainSize));
  }
  auto storage = std::make_shared<Storage>();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!storage->index.emplace(ids[i], static_cast<PointIndex>(i)).second) {
      throw ArgumentError(kModule, "duplicate domain point '" + ids[i] + "'");
    }
  }
  storage->ids = std::move(ids);
  storage_ = std::move(storage);
}

Domain Domain::numbered(std::size_t size, std::size_t first) {
  std::vector<std::string> ids;
  ids.reserve(size);
  for (std::size_t i = 0; i < size; ++i) ids.push_back(std::to_string(first + i));
  return Domain(std::move(ids));
}

std::size_t Domain::size() const noexcept { return storage_->ids.size(); }

const std::string& Domain::id(PointIndex x) const { return storage_->ids.at(x); }

const std::vector<std::string>& Domain::ids() const noexcept { return storage_->ids; }

std::optional<PointIndex> Domain::find(const std::string& id) const {
  auto it = storage_->index.find(id);
  if (it == storage_->index.end()) return std::nullopt;
  return it->second;
}

PointIndex Domain::index_of(const std::string& id) const {
  if (auto x = find(id)) return *x;
  throw DomainMismatchError(kModule, "point '" + id + "' is not in the domain");
}

bool operator==(const Domain& a, const Domain& b) {
  return a.storage_ == b.storage_ || a.storage_->ids == b.storage_->ids;
}

// ---------------------------------------------------------------------------
// Hypothesis

Hypothesis::Hypothesis(std::uint64_t plus_mask, std::size_t size)
    : bits_(plus_mask & low_mask(size)), size_(static_cast<std::uint32_t>(size)) {
  if (size > kMaxDomainSize) {
    throw SizeError(kModule, "hypothesis over more than 64 points");
  }
}

Hypothesis Hypothesis::all_plus(std::size_t size) { return Hypothesis(low_mask(size), size); }

Hypothesis Hypothesis::all_minus(std::size_t size) { return Hypothesis(0, size); }

Hypothesis Hypothesis::from_labels(std::span<const Label> labels) {
  std::uint64_t bits = 0;
  if (labels.size() > kMaxDomainSize) throw SizeError(kModule, "hypothesis over more than 64 points");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::plus) bits |= std::uint64_t{1} << i;
  }
  return Hypothesis(bits, labels.size());
}

Hypothesis Hypothesis::from_pattern(const std::string& pattern) {
  std::vector<Label> labels;
  for (char ch : pattern) {
    if (ch == '+') {
      labels.push_back(Label::plus);
    } else if (ch == '-') {
      labels.push_back(Label::minus);
    } else {
      throw ArgumentError(kModule, "invalid character in hypothesis pattern '" + pattern + "'");
    }
  }
  return from_labels(labels);
}

Hypothesis Hypothesis::with_label(PointIndex x, Label y) const {
  if (x >= size_) throw DomainMismatchError(kModule, "point index out of range");
  const std::uint64_t bit = std::uint64_t{1} << x;
  return Hypothesis(y == Label::plus ? (bits_ | bit) : (bits_ & ~bit), size_);
}

std::string Hypothesis::pattern() const {
  std::string out(size_, '-');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((bits_ >> i) & 1U) out[i] = '+';
  }
  return out;
}

std::strong_ordering operator<=>(const Hypothesis& a, const Hypothesis& b) noexcept {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  const std::uint64_t diff = a.bits_ ^ b.bits_;
  if (diff == 0) return std::strong_ordering::equal;
  const auto first = std::countr_zero(diff);
  return ((a.bits_ >> first) & 1U) ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::size_t HypothesisHash::operator()(const Hypothesis& h) const noexcept {
  return static_cast<std::size_t>(h.plus_mask() * 0x9E3779B97F4A7C15ULL ^ h.size());
}

// ---------------------------------------------------------------------------
// ConceptClass

ConceptClass::ConceptClass(Domain domain, std::vector<Hypothesis> hypotheses, Ordering ordering)
    : domain_(std::move(domain)), hypotheses_(std::move(hypotheses)) {
  for (const auto& h : hypotheses_) {
    if (h.size() != domain_.size()) {
      throw ArgumentError(kModule, "hypothesis of length " + std::to_string(h.size()) +
                                       " over a domain of " + std::to_string(domain_.size()) +
                                       " points");
    }
  }
  if (ordering == Ordering::lexicographic) std::sort(hypotheses_.begin(), hypotheses_.end());
  index_.reserve(hypotheses_.size());
  for (std::size_t i = 0; i < hypotheses_.size(); ++i) {
    if (!index_.emplace(hypotheses_[i], i).second) {
      throw ArgumentError(kModule, "duplicate hypothesis " + hypotheses_[i].pattern());
    }
  }
}

bool ConceptClass::contains(const Hypothesis& h) const { return index_.contains(h); }

std::optional<std::size_t> ConceptClass::index_of(const Hypothesis& h) const {
  auto it = index_.find(h);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Generators

ConceptClass make_cube(std::size_t d, const BruteForceLimits& limits) {
  if (d < 1) throw ArgumentError(kModule, "cube dimension must be at least 1");
  if (d > limits.max_cube_dimension) {
    throw SizeError(kModule, "cube dimension " + std::to_string(d) + " exceeds cap " +
                                 std::to_string(limits.max_cube_dimension));
  }
  std::vector<Hypothesis> all;
  all.reserve(std::size_t{1} << d);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) all.emplace_back(bits, d);
  return ConceptClass(Domain::numbered(d), std::move(all));
}

ConceptClass make_thresholds(std::size_t t) {
  if (t < 2) throw ArgumentError(kModule, "thresholds need t >= 2");
  if (t - 1 > kMaxDomainSize) throw SizeError(kModule, "threshold domain exceeds 64 points");
  const std::size_t points = t - 1;
  std::vector<Hypothesis> taus;
  taus.reserve(t);
  for (std::size_t i = 1; i <= t; ++i) {
    // Point index p carries the value p + 1; tau_i is + on values >= i.
    std::uint64_t bits = 0;
    for (std::size_t p = 0; p < points; ++p) {
      if (p + 1 >= i) bits |= std::uint64_t{1} << p;
    }
    taus.emplace_back(bits, points);
  }
  return ConceptClass(Domain::numbered(points), std::move(taus), ConceptClass::Ordering::as_given);
}

ConceptClass make_singletons(std::size_t s) {
  if (s < 2) throw ArgumentError(kModule, "singletons need s >= 2");
  if (s > kMaxDomainSize) throw SizeError(kModule, "singleton domain exceeds 64 points");
  std::vector<Hypothesis> singles;
  for (std::size_t i = 0; i < s; ++i) singles.emplace_back(std::uint64_t{1} << i, s);
  return ConceptClass(Domain::numbered(s), std::move(singles));
}

// ---------------------------------------------------------------------------
// Dimensions

std::size_t vc_dimension(const ConceptClass& c, const BruteForceLimits& limits) {
  const std::size_t d = c.domain().size();
  if (d > limits.max_domain) {
    throw SizeError(kModule, "vc_dimension: domain of " + std::to_string(d) +
                                 " points exceeds cap " + std::to_string(limits.max_domain), 0);
  }
  if (c.size() <= 1) return 0;
  std::size_t best = 0;
  for (std::size_t k = 1; k <= d; ++k) {
    if ((std::size_t{1} << k) > c.size()) break;
    if (k > limits.max_subset) {
      throw SizeError(kModule, "vc_dimension: subset size cap " + std::to_string(limits.max_subset) +
                                   " reached", best);
    }
    const bool shattered = for_each_subset(d, k, [&](std::uint64_t mask) {
      const auto points = mask_points(mask);
      const auto present = projection_table(c, points);
      return std::all_of(present.begin(), present.end(), [](std::uint8_t v) { return v != 0; });
    });
    if (!shattered) break;
    best = k;
  }
  return best;
}

namespace {

class LittlestoneSolver {
 public:
  explicit LittlestoneSolver(const ConceptClass& c) : c_(c) {}

  std::size_t solve(const std::vector<std::uint32_t>& members) {
    if (members.size() <= 1) return 0;
    if (auto it = memo_.find(members); it != memo_.end()) return it->second;
    const std::size_t upper = static_cast<std::size_t>(std::bit_width(members.size())) - 1;
    std::size_t best = 0;
    std::vector<std::uint32_t> plus_side;
    std::vector<std::uint32_t> minus_side;
    for (PointIndex x = 0; x < c_.domain().size() && best < upper; ++x) {
      plus_side.clear();
      minus_side.clear();
      for (auto m : members) {
        (c_[m](x) == Label::plus ? plus_side : minus_side).push_back(m);
      }
      if (plus_side.empty() || minus_side.empty()) continue;
      auto& small = plus_side.size() <= minus_side.size() ? plus_side : minus_side;
      auto& large = plus_side.size() <= minus_side.size() ? minus_side : plus_side;
      if (static_cast<std::size_t>(std::bit_width(small.size())) <= best) continue;
      const std::size_t a = solve(small);
      if (1 + a <= best) continue;
      const std::size_t b = solve(large);
      best = std::max(best, 1 + std::min(a, b));
    }
    memo_.emplace(members, best);
    return best;
  }

 private:
  const ConceptClass& c_;
  std::map<std::vector<std::uint32_t>, std::size_t> memo_;
};

}  // namespace

std::size_t littlestone_dimension(const ConceptClass& c, const BruteForceLimits& limits) {
  if (c.domain().size() > limits.max_domain) {
    throw SizeError(kModule, "littlestone_dimension: domain of " +
                                 std::to_string(c.domain().size()) + " points exceeds cap " +
                                 std::to_string(limits.max_domain));
  }
  if (c.size() > limits.max_class_size) {
    throw SizeError(kModule, "littlestone_dimension: class of " + std::to_string(c.size()) +
                                 " hypotheses exceeds cap " + std::to_string(limits.max_class_size));
  }
  std::vector<std::uint32_t> all(c.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return LittlestoneSolver(c).solve(all);
}

std::optional<HollowStar> find_hollow_star(const ConceptClass& c, std::size_t size) {
  std::optional<HollowStar> star;
  for_each_subset(c.domain().size(), size, [&](std::uint64_t mask) {
    const auto points = mask_points(mask);
    const auto present = projection_table(c, points);
    for (std::size_t f = 0; f < present.size(); ++f) {
      if (present[f]) continue;
      bool hollow = true;
      for (std::size_t i = 0; i < size && hollow; ++i) hollow = present[f ^ (std::size_t{1} << i)] != 0;
      if (hollow) {
        HollowStar found{points, {}};
        for (std::size_t i = 0; i < size; ++i) {
          found.centre.push_back((f >> i) & 1U ? Label::plus : Label::minus);
        }
        star = std::move(found);
        return true;
      }
    }
    return false;
  });
  return star;
}

std::size_t hollow_star_number(const ConceptClass& c, std::size_t cap) {
  if (cap > 20) {
    throw SizeError(kModule, "hollow_star_number: cap " + std::to_string(cap) + " exceeds 20");
  }
  // A hollow star of size s needs s distinct neighbours in the class.
  const std::size_t top = std::min({cap, c.domain().size(), c.size()});
  for (std::size_t s = top; s >= 1; --s) {
    if (find_hollow_star(c, s)) return s;
  }
  return 0;
}

}  // namespace stablab
