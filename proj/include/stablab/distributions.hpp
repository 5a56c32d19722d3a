#pragma once

#include <span>
#include <vector>

#include "stablab/concepts.hpp"
#include "stablab/seed.hpp"

namespace stablab {

struct LabeledExample {
  PointIndex x = 0;
  Label y = Label::plus;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Canonical atom order: by point, then + before -.
bool example_less(const LabeledExample& a, const LabeledExample& b) noexcept;

/// Examples in draw order; the booster slices prefix and suffix by position.
using Sample = std::vector<LabeledExample>;
using SampleView = std::span<const LabeledExample>;

struct Atom {
  LabeledExample example;
  double mass = 0.0;
};

/// Probability mass over finitely many labeled examples.
///
/// Construction merges duplicate (x, y) atoms, drops zero-mass atoms, sorts
/// atoms canonically and renormalizes. Masses must be non-negative and sum to
/// 1 within 1e-9.
class FiniteDistribution {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  FiniteDistribution(Domain domain, std::vector<Atom> atoms);

  /// The empirical distribution of a nonempty sample.
  static FiniteDistribution empirical(const Domain& domain, SampleView sample);

  const Domain& domain() const noexcept { return domain_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  double mass(const LabeledExample& e) const noexcept;
  /// Marginal mass of a point (both labels).
  double point_mass(PointIndex x) const noexcept;

  /// Index of the atom selected by u in [0, 1) via the cumulative masses.
  std::size_t atom_for(double u) const noexcept;

 private:
  Domain domain_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

bool is_realizable(const FiniteDistribution& d, const ConceptClass& c);

double population_loss(const Hypothesis& h, const FiniteDistribution& d);

/// Fraction of examples misclassified by h; an empty sample is an ArgumentError.
double empirical_loss(const Hypothesis& h, SampleView sample);

/// n i.i.d. draws, a pure function of (d, n, seed).
Sample draw_sample(const FiniteDistribution& d, std::size_t n, SeedKey seed);

/// Half the L1 distance, over the union of supports matched by point id.
double tv_distance(const FiniteDistribution& a, const FiniteDistribution& b);

/// Per-point label counts of a sample; the common sufficient statistic of the
/// built-in learners.
struct PointCounts {
  std::vector<std::uint32_t> plus;
  std::vector<std::uint32_t> minus;
  std::size_t total = 0;

  PointCounts(std::size_t domain_size, SampleView sample);
  /// Number of examples h misclassifies.
  std::size_t mistakes(const Hypothesis& h) const noexcept;
};

}  // namespace stablab
