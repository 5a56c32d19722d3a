#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>

#include "stablab/distributions.hpp"
#include "stablab/learners.hpp"

namespace stablab {

/// Empirical output frequencies of a learner. Keys are kept in canonical
/// hypothesis order so every derived statistic and report is deterministic.
struct OutputHistogram {
  std::map<Hypothesis, std::uint64_t> counts;
  std::uint64_t trials = 0;
  std::uint64_t fallbacks = 0;
  std::size_t n = 0;
  SeedKey seed;

  void add(const LearnerOutput& out);
  /// Count addition; both histograms must share n and seed.
  void merge(const OutputHistogram& other);
  double frequency(const Hypothesis& h) const;
};

struct StabilityReport {
  double rho_hat = 0.0;
  Hypothesis modal;
  double collision_hat = 0.0;
  double ci_half_width = 0.0;
  std::uint64_t trials = 0;
  std::size_t n = 0;
};

/// Frequency estimate with a two-sided confidence half-width.
struct Estimate {
  double value = 0.0;
  double ci_half_width = 0.0;
};

inline constexpr double kDefaultBeta = 0.01;

/// Hoeffding half-width sqrt(ln(2/beta) / (2 trials)).
double hoeffding_half_width(std::uint64_t trials, double beta = kDefaultBeta);

/// Scale sqrt(ln(2m) / (2 trials)) used for "within 3 sigma" checks of m
/// simultaneous frequencies.
double hoeffding_sigma(std::uint64_t trials, std::size_t m = 1);

/// Called once per trial; may be invoked concurrently when threads > 1.
using TrialObserver = std::function<void(std::uint64_t trial, SampleView sample, const LearnerOutput& out)>;

struct MonteCarloOptions {
  unsigned threads = 1;
  TrialObserver observer = {};
};

/// Trial i draws S with seed.child(i).child("sample") and runs the learner
/// with seed.child(i).child("learner").
OutputHistogram output_histogram(const Learner& a, const FiniteDistribution& d, std::size_t n,
                                 std::uint64_t trials, SeedKey seed,
                                 const MonteCarloOptions& options = {});

/// Same as output_histogram restricted to trial indices [first, last).
OutputHistogram output_histogram_range(const Learner& a, const FiniteDistribution& d,
                                       std::size_t n, std::uint64_t first, std::uint64_t last,
                                       SeedKey seed, const MonteCarloOptions& options = {});

StabilityReport stability_report(const OutputHistogram& h, double beta = kDefaultBeta);

/// Pr[A(S, r) = A(S', r)] with one shared seed r per trial.
Estimate shared_randomness_replicability(const Learner& a, const FiniteDistribution& d,
                                         std::size_t n, std::uint64_t trials, SeedKey seed,
                                         const MonteCarloOptions& options = {},
                                         double beta = kDefaultBeta);

/// Pr[A(S, r) = A(S', r')] with independent seeds: the collision probability.
Estimate independent_replicability(const Learner& a, const FiniteDistribution& d, std::size_t n,
                                   std::uint64_t trials, SeedKey seed,
                                   const MonteCarloOptions& options = {},
                                   double beta = kDefaultBeta);

using ExactDistribution = std::map<Hypothesis, double>;

/// Enumerates every sample of size n with its probability and combines the
/// learner's exact output law. Requires support_size^n <= max_samples.
ExactDistribution exact_output_distribution(const Learner& a, const FiniteDistribution& d,
                                            std::size_t n, std::uint64_t max_samples = 1'000'000);

double list_coverage(const OutputHistogram& h, std::span<const Hypothesis> list);

/// Probability mass an exact distribution puts on a list.
double list_coverage(const ExactDistribution& p, std::span<const Hypothesis> list);

/// The `size` most likely hypotheses, ties broken canonically.
std::vector<Hypothesis> top_hypotheses(const ExactDistribution& p, std::size_t size);
std::vector<Hypothesis> top_hypotheses(const OutputHistogram& h, std::size_t size);

}  // namespace stablab
