#pragma once

#include <cstddef>

#include "stablab/learners.hpp"

namespace stablab {

/// Parameters of the list learner built from a rho-globally-stable learner.
///
/// L = floor(1/rho) and alpha = rho - 1/(L+1) > 0. The batch count and the
/// holdout size instantiate the two concentration steps with two-sided
/// Hoeffding bounds and a delta/2 + delta/2 failure split:
///   T  = ceil(8 ln(4/delta) / alpha^2)        batch frequencies within alpha/2
///   n2 = ceil(2 ln(4(L+1)/delta) / eps^2)     holdout losses within eps/2
struct BoostParams {
  double rho = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t list_size = 0;  // L
  double alpha = 0.0;
  std::size_t batches = 0;    // T
  std::size_t batch_size = 0; // n0
  std::size_t prefix_size = 0;  // n1 = T * n0
  std::size_t holdout_size = 0; // n2

  std::size_t sample_size() const noexcept { return prefix_size + holdout_size; }
  /// Minimum number of batches a candidate must win: ceil((rho - alpha/2) T).
  std::size_t frequency_threshold() const noexcept;
  /// Holdout loss bound 3 eps / 2.
  double holdout_loss_bound() const noexcept { return 1.5 * eps; }
};

BoostParams boost_params(double rho, double eps, double delta, std::size_t n0);

/// The list learner. On a sample of at least n1 + n2 examples: runs the inner
/// learner on T consecutive batches of the first n1 examples, keeps outputs
/// that won at least the frequency threshold, and among those with holdout
/// loss (last n2 examples) at most 3 eps / 2 returns the most frequent one
/// (canonical tie-break). Otherwise returns `fallback` flagged.
Learner boost(const Learner& inner, const BoostParams& params, const Hypothesis& fallback);

/// Same with the all-plus hypothesis as the fixed fallback.
Learner boost(const Learner& inner, const BoostParams& params);

}  // namespace stablab
