#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stablab/concepts.hpp"
#include "stablab/distributions.hpp"
#include "stablab/estimators.hpp"
#include "stablab/learners.hpp"

namespace stablab {

/// Conjunction of point labels; a hypothesis is in the cell iff it agrees
/// with every literal.
using Cell = std::vector<LabeledExample>;

bool in_cell(const Hypothesis& h, const Cell& cell) noexcept;

/// Instability witness of size k: the map W = (W_X, W_pm) on [k] x {-,+},
/// the anchor (x, y) and the cells F_0, ..., F_k of the output class.
/// Index j in [0, k) stands for the witness coordinate j + 1.
struct InstabilityWitness {
  Domain domain;
  std::vector<LabeledExample> minus_side;  // W(j, -)
  std::vector<LabeledExample> plus_side;   // W(j, +)
  LabeledExample anchor;
  std::vector<Cell> partition;             // F_0 .. F_k

  std::size_t k() const noexcept { return minus_side.size(); }
  const LabeledExample& at(std::size_t j, Label side) const {
    return side == Label::plus ? plus_side.at(j) : minus_side.at(j);
  }
};

/// Witness from the shattered points 1..d of the cube: W(j, b) = (x_j, b),
/// anchor (x_0, +), F_0 = + on x_1..x_{d-1}, F_j = + on x_1..x_{j-1} and - on x_j.
InstabilityWitness cube_witness(std::size_t d);

/// Witness from a hollow star x_0..x_{s-1} with missing all-minus centre:
/// W(j, -) = (x_1, -), W(j, +) = (x_{j+1}, -), anchor (x_0, -),
/// F_0 = + on x_1, F_j = - on x_1..x_j and + on x_{j+1}.
InstabilityWitness hollow_star_witness(const ConceptClass& c, const std::vector<PointIndex>& star_points);

struct WitnessCheck {
  bool valid = false;
  std::string detail;

  explicit operator bool() const noexcept { return valid; }
};

/// Exhaustive check of both witness conditions: realizability through the
/// anchor for every sign vector (against c) and the partition conditions
/// (against the output class f).
WitnessCheck validate_witness(const InstabilityWitness& w, const ConceptClass& c,
                              const ConceptClass& f, std::uint64_t budget = std::uint64_t{1} << 26);

/// D_t: mass |t_j|/k on W(j, sign t_j) and the remainder on the anchor.
FiniteDistribution witness_distribution(const InstabilityWitness& w, std::span<const double> t);

/// Monte Carlo estimate of g_j(t) = P[A(S) in F_0] - P[A(S) in F_j] + damping t_j
/// from one shared histogram under D_t.
struct GEstimate {
  std::vector<double> t;
  std::vector<double> g;
  /// Half-width for each g_j (the indicator difference ranges over [-1, 1]).
  double ci_half_width = 0.0;
  std::vector<double> cell_frequencies;  // F_0 .. F_k
  double other_frequency = 0.0;          // outputs in no cell
  OutputHistogram histogram;
};

GEstimate g_vector(const Learner& a, const InstabilityWitness& w, std::span<const double> t,
                   double damping, std::size_t n, std::uint64_t trials, SeedKey seed,
                   const MonteCarloOptions& options = {}, double beta = kDefaultBeta);

struct SolverOptions {
  double damping = 0.02;
  std::size_t n = 100;
  std::uint64_t trials = 5000;
  double tol = 0.02;
  std::size_t max_sweeps = 25;
  std::size_t max_bisection_steps = 48;
  /// Sign decisions closer to zero than their CI are re-estimated with a
  /// doubled budget, up to trials * max_budget_factor.
  std::uint64_t max_budget_factor = 8;
  double beta = kDefaultBeta;
  unsigned threads = 1;
};

struct InstabilityCertificate {
  enum class Status { converged, unconverged };

  Status status = Status::unconverged;
  std::size_t k = 0;
  std::vector<double> t_star;
  double residual = 0.0;
  std::optional<FiniteDistribution> distribution;
  std::vector<double> g;
  std::vector<double> cell_frequencies;
  double other_frequency = 0.0;
  double max_frequency = 0.0;
  Hypothesis modal;
  double ci = 0.0;
  /// Target 1/(k+1).
  double bound = 0.0;
  /// Smallest sign margin observed on the 2k face centres.
  double boundary_margin = 0.0;
  std::size_t sweeps = 0;
  std::size_t evaluations = 0;
  std::uint64_t trials = 0;
  std::size_t n = 0;
  double damping = 0.0;
  double tol = 0.0;
};

std::string to_string(InstabilityCertificate::Status status);

/// Locates t* with g(t*) ~ 0 by Gauss-Seidel coordinate bisection over the
/// cube [-1, 1]^k, after validating the witness and checking the boundary
/// sign conditions at the face centres. All evaluations share one seed
/// stream (common random numbers), so the estimates vary smoothly in t.
/// The certificate speaks about the supplied learner only.
InstabilityCertificate find_hard_distribution(const Learner& a, const InstabilityWitness& w,
                                              const ConceptClass& c, const ConceptClass& f,
                                              const SolverOptions& options, SeedKey seed);

}  // namespace stablab
