#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stablab/concepts.hpp"
#include "stablab/distributions.hpp"
#include "stablab/seed.hpp"

namespace stablab {

/// One evaluation result. `fallback` marks outputs produced by a learner's
/// "no qualifying hypothesis" branch so harnesses can count those events.
struct LearnerOutput {
  Hypothesis hypothesis;
  bool fallback = false;

  friend bool operator==(const LearnerOutput&, const LearnerOutput&) = default;
};

/// Output law of a learner on a fixed sample, over its internal randomness.
using OutputLaw = std::vector<std::pair<LearnerOutput, double>>;

/// A learning rule with its internal randomness made explicit: evaluate is a
/// pure function of (sample, seed).
class Learner {
 public:
  using EvaluateFn = std::function<LearnerOutput(SampleView, SeedKey)>;
  using LawFn = std::function<OutputLaw(SampleView)>;
  using SampleSizeFn = std::function<std::size_t(double eps, double delta)>;

  struct Parts {
    std::string name;
    Domain domain;
    EvaluateFn evaluate;
    /// Exact output law over the internal randomness; derived automatically
    /// for deterministic learners.
    LawFn law = {};
    SampleSizeFn sample_size = {};
    bool deterministic = false;
    /// Set for proper learners: every output lies in this class.
    std::optional<ConceptClass> proper_class = std::nullopt;
  };

  explicit Learner(Parts parts);

  LearnerOutput operator()(SampleView sample, SeedKey seed) const;

  const std::string& name() const noexcept { return parts_.name; }
  const Domain& domain() const noexcept { return parts_.domain; }
  bool deterministic() const noexcept { return parts_.deterministic; }
  bool proper() const noexcept { return parts_.proper_class.has_value(); }
  const std::optional<ConceptClass>& proper_class() const noexcept { return parts_.proper_class; }

  bool has_output_law() const noexcept;
  /// Exact law for one sample; ArgumentError if the learner has none.
  OutputLaw output_law(SampleView sample) const;

  bool has_sample_size() const noexcept { return static_cast<bool>(parts_.sample_size); }
  std::size_t sample_size(double eps, double delta) const;

  /// The output class F: the proper class if set, otherwise the full cube on
  /// the domain (materialized on demand).
  ConceptClass output_class() const;

 private:
  Parts parts_;
};

/// Canonically-first empirical-loss minimizer over c; ignores the seed.
Learner erm_learner(const ConceptClass& c);

/// Random-cutoff learner for the full cube on points 1..d: draws kappa
/// uniformly in [0, eps/(2d)], keeps the observed label on points whose
/// empirical frequency is at least kappa and labels every other point +.
Learner cube_learner(std::size_t d, double eps);

/// Deterministic proper learner for thresholds on t-1 points: outputs tau_i for
/// the smallest i with L_S(tau_i) < eps / (2(t-i+1)). Falls back to tau_t
/// (flagged) when no i qualifies.
Learner threshold_learner(std::size_t t, double eps);

/// sigma_i = eps / (2(t - i + 1)) for i = 1..t (index 0 holds sigma_1).
std::vector<double> threshold_cutoffs(std::size_t t, double eps);

/// Keeps A's output when its empirical loss is at most eps + delta; otherwise
/// substitutes the ERM output over c, which must have loss below eps + delta.
Learner empiricalize(const Learner& inner, const ConceptClass& c, double eps, double delta);

using Coloring = std::function<Hypothesis(const FiniteDistribution&)>;

/// Outputs color(empirical distribution of S); deterministic.
Learner coloring_learner(Coloring color, const Domain& domain, std::size_t n);

/// Colouring by exact ERM over c on the given distribution.
Coloring erm_coloring(const ConceptClass& c);

/// Ignores the sample and draws its output from a fixed law using the seed.
/// Weights must be positive and sum to 1.
Learner fixed_law_learner(std::vector<std::pair<Hypothesis, double>> law, const Domain& domain);

Learner constant_learner(const Hypothesis& h, const Domain& domain);

/// h_j for j = 1..d: the true label of D on the j heaviest points (canonical
/// tie-break) and + everywhere else. The list the cube learner concentrates on.
std::vector<Hypothesis> cube_candidate_list(const FiniteDistribution& d);

}  // namespace stablab
