#include "stablab/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "adversary";

std::string describe(const Domain& domain, const LabeledExample& e) {
  return "(" + domain.id(e.x) + "," + to_char(e.y) + ")";
}

std::string sigma_string(std::uint64_t mask, std::size_t k) {
  std::string out;
  for (std::size_t j = 0; j < k; ++j) out += (mask >> j) & 1U ? '+' : '-';
  return out;
}

WitnessCheck fail(std::string detail) { return {false, std::move(detail)}; }

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

bool in_cell(const Hypothesis& h, const Cell& cell) noexcept {
  return std::all_of(cell.begin(), cell.end(), [&](const LabeledExample& lit) {
    return lit.x < h.size() && h(lit.x) == lit.y;
  });
}

InstabilityWitness cube_witness(std::size_t d) {
  if (d < 2) throw ArgumentError(kModule, "cube_witness: d must be at least 2");
  InstabilityWitness w;
  w.domain = Domain::numbered(d);
  w.anchor = {0, Label::plus};
  Cell all_plus;
  for (PointIndex j = 1; j < d; ++j) {
    w.minus_side.push_back({j, Label::minus});
    w.plus_side.push_back({j, Label::plus});
    all_plus.push_back({j, Label::plus});
  }
  w.partition.push_back(all_plus);
  for (PointIndex j = 1; j < d; ++j) {
    Cell cell;
    for (PointIndex i = 1; i < j; ++i) cell.push_back({i, Label::plus});
    cell.push_back({j, Label::minus});
    w.partition.push_back(std::move(cell));
  }
  return w;
}

InstabilityWitness hollow_star_witness(const ConceptClass& c, const std::vector<PointIndex>& star_points) {
  const std::size_t s = star_points.size();
  if (s < 3) throw ArgumentError(kModule, "hollow_star_witness: need at least 3 star points");
  for (auto x : star_points) {
    if (x >= c.domain().size()) throw DomainMismatchError(kModule, "hollow_star_witness: star point outside the domain");
  }
  // Projection onto the star points: all-minus absent, every single-plus present.
  std::vector<bool> single_plus(s, false);
  for (const auto& h : c.hypotheses()) {
    std::size_t plus_count = 0;
    std::size_t last_plus = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (h(star_points[i]) == Label::plus) {
        ++plus_count;
        last_plus = i;
      }
    }
    if (plus_count == 0) {
      throw ValidationError(kModule, "hollow_star_witness: the all-minus pattern is present on the star points");
    }
    if (plus_count == 1) single_plus[last_plus] = true;
  }
  for (std::size_t i = 0; i < s; ++i) {
    if (!single_plus[i]) {
      throw ValidationError(kModule, "hollow_star_witness: no hypothesis is + only on star point " +
                                         c.domain().id(star_points[i]));
    }
  }

  InstabilityWitness w;
  w.domain = c.domain();
  w.anchor = {star_points[0], Label::minus};
  const std::size_t k = s - 2;
  for (std::size_t j = 1; j <= k; ++j) {
    w.minus_side.push_back({star_points[1], Label::minus});
    w.plus_side.push_back({star_points[j + 1], Label::minus});
  }
  w.partition.push_back(Cell{{star_points[1], Label::plus}});
  for (std::size_t j = 1; j <= k; ++j) {
    Cell cell;
    for (std::size_t i = 1; i <= j; ++i) cell.push_back({star_points[i], Label::minus});
    cell.push_back({star_points[j + 1], Label::plus});
    w.partition.push_back(std::move(cell));
  }
  return w;
}

WitnessCheck validate_witness(const InstabilityWitness& w, const ConceptClass& c,
                              const ConceptClass& f, std::uint64_t budget) {
  if (!(w.domain == c.domain()) || !(w.domain == f.domain())) {
    throw DomainMismatchError(kModule, "validate_witness: witness, class and output class domains differ");
  }
  const std::size_t k = w.k();
  if (k == 0) return fail("witness has size 0");
  if (w.plus_side.size() != k) return fail("W(., -) and W(., +) have different lengths");
  if (w.partition.size() != k + 1) return fail("partition must have k+1 = " + std::to_string(k + 1) + " cells");
  for (const auto& side : {&w.minus_side, &w.plus_side}) {
    for (const auto& e : *side) {
      if (e.x >= w.domain.size()) throw DomainMismatchError(kModule, "validate_witness: W maps outside the domain");
    }
  }
  if (k >= 63 || (std::uint64_t{1} << k) > budget / std::max<std::uint64_t>(c.size(), 1)) {
    throw SizeError(kModule, "validate_witness: 2^" + std::to_string(k) + " x " +
                                 std::to_string(c.size()) + " checks exceed the budget");
  }

  // Item (1): every sign pattern is realizable through the anchor.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<LabeledExample> constraints;
    for (std::size_t j = 0; j < k; ++j) {
      const LabeledExample& e = w.at(j, (mask >> j) & 1U ? Label::plus : Label::minus);
      if (e == w.anchor) {
        return fail("realizability anchor conflict: W(" + std::to_string(j + 1) + ",sigma_j) = anchor " +
                    describe(w.domain, w.anchor) + " for sigma=" + sigma_string(mask, k));
      }
      constraints.push_back(e);
    }
    const bool realized = std::any_of(c.hypotheses().begin(), c.hypotheses().end(), [&](const Hypothesis& h) {
      if (h(w.anchor.x) != w.anchor.y) return false;
      return std::all_of(constraints.begin(), constraints.end(),
                         [&](const LabeledExample& e) { return h(e.x) == e.y; });
    });
    if (!realized) return fail("no hypothesis realizes the anchor and sigma=" + sigma_string(mask, k));
  }

  // Item (2): the cells partition F and satisfy conditions (a) and (b).
  std::vector<std::vector<std::size_t>> membership(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t cell = 0; cell <= k; ++cell) {
      if (in_cell(f[i], w.partition[cell])) membership[i].push_back(cell);
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (membership[i].size() > 1) {
      return fail("partition not disjoint: " + f[i].pattern() + " lies in F_" +
                  std::to_string(membership[i][0]) + " and F_" + std::to_string(membership[i][1]));
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (membership[i].empty()) return fail("partition does not cover F: " + f[i].pattern() + " lies in no cell");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::size_t cell = membership[i][0];
    const Hypothesis& h = f[i];
    if (cell == 0) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto& e = w.minus_side[j];
        if (h(e.x) == e.y) {
          return fail("condition (a) fails: " + h.pattern() + " in F_0 agrees with W(" +
                      std::to_string(j + 1) + ",-) = " + describe(w.domain, e));
        }
      }
    } else {
      const auto& e = w.plus_side[cell - 1];
      if (h(e.x) == e.y) {
        return fail("condition (b) fails: " + h.pattern() + " in F_" + std::to_string(cell) +
                    " agrees with W(" + std::to_string(cell) + ",+) = " + describe(w.domain, e));
      }
    }
  }
  return {true, "ok"};
}

FiniteDistribution witness_distribution(const InstabilityWitness& w, std::span<const double> t) {
  const std::size_t k = w.k();
  if (t.size() != k) {
    throw ArgumentError(kModule, "witness_distribution: t has " + std::to_string(t.size()) +
                                     " coordinates, witness has size " + std::to_string(k));
  }
  std::vector<Atom> atoms;
  double spent = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(std::abs(t[j]) <= 1.0)) {
      throw ArgumentError(kModule, "witness_distribution: t_" + std::to_string(j + 1) + " outside [-1, 1]");
    }
    const double m = std::abs(t[j]) / static_cast<double>(k);
    atoms.push_back({w.at(j, sign_label(t[j])), m});
    spent += m;
  }
  atoms.push_back({w.anchor, std::max(0.0, 1.0 - spent)});
  return FiniteDistribution(w.domain, std::move(atoms));
}

GEstimate g_vector(const Learner& a, const InstabilityWitness& w, std::span<const double> t,
                   double damping, std::size_t n, std::uint64_t trials, SeedKey seed,
                   const MonteCarloOptions& options, double beta) {
  const std::size_t k = w.k();
  const FiniteDistribution d = witness_distribution(w, t);
  GEstimate est;
  est.t.assign(t.begin(), t.end());
  est.histogram = output_histogram(a, d, n, trials, seed, options);

  std::vector<std::uint64_t> cell_counts(k + 1, 0);
  std::uint64_t other = 0;
  for (const auto& [h, count] : est.histogram.counts) {
    if (h.size() != w.domain.size()) {
      throw DomainMismatchError(kModule, "g_vector: learner output over " + std::to_string(h.size()) +
                                             " points, witness domain has " +
                                             std::to_string(w.domain.size()));
    }
    bool placed = false;
    for (std::size_t cell = 0; cell <= k; ++cell) {
      if (in_cell(h, w.partition[cell])) {
        cell_counts[cell] += count;
        placed = true;
      }
    }
    if (!placed) other += count;
  }
  const double total = static_cast<double>(est.histogram.trials);
  for (auto c : cell_counts) est.cell_frequencies.push_back(static_cast<double>(c) / total);
  est.other_frequency = static_cast<double>(other) / total;
  for (std::size_t j = 0; j < k; ++j) {
    est.g.push_back(est.cell_frequencies[0] - est.cell_frequencies[j + 1] + damping * t[j]);
  }
  est.ci_half_width = 2.0 * hoeffding_half_width(est.histogram.trials, beta);
  return est;
}

std::string to_string(InstabilityCertificate::Status status) {
  return status == InstabilityCertificate::Status::converged ? "converged" : "unconverged";
}

InstabilityCertificate find_hard_distribution(const Learner& a, const InstabilityWitness& w,
                                              const ConceptClass& c, const ConceptClass& f,
                                              const SolverOptions& options, SeedKey seed) {
  if (!(options.tol > 0.0) || options.trials == 0 || options.n == 0) {
    throw ArgumentError(kModule, "find_hard_distribution: tol, trials and n must be positive");
  }
  if (const auto check = validate_witness(w, c, f); !check) {
    throw ValidationError(kModule, "find_hard_distribution: witness rejected: " + check.detail);
  }
  const std::size_t k = w.k();
  const MonteCarloOptions mc{options.threads, {}};
  const SeedKey stream = seed.child("g");
  std::size_t evaluations = 0;

  auto evaluate = [&](const std::vector<double>& t, std::uint64_t trials) {
    ++evaluations;
    return g_vector(a, w, t, options.damping, options.n, trials, stream, mc, options.beta);
  };

  // Boundary sign conditions at the 2k face centres.
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    for (double face : {-1.0, 1.0}) {
      std::vector<double> t(k, 0.0);
      t[j] = face;
      const GEstimate est = evaluate(t, options.trials);
      const double signed_value = face < 0 ? -est.g[j] : est.g[j];
      margin = std::min(margin, signed_value);
      if (signed_value < -est.ci_half_width) {
        throw PreconditionError(kModule, "learner violates empirical precondition: g_" + std::to_string(j + 1) +
                                             " = " + std::to_string(est.g[j]) + " on the face t_" +
                                             std::to_string(j + 1) + " = " + (face < 0 ? "-1" : "+1"));
      }
    }
  }

  const double inner_tol = options.tol / 2.0;
  const std::uint64_t max_budget = options.trials * std::max<std::uint64_t>(options.max_budget_factor, 1);
  auto decide = [&](const std::vector<double>& t, std::size_t j) {
    std::uint64_t budget = options.trials;
    GEstimate est = evaluate(t, budget);
    while (std::abs(est.g[j]) > inner_tol && std::abs(est.g[j]) < est.ci_half_width && budget * 2 <= max_budget) {
      budget *= 2;
      est = evaluate(t, budget);
    }
    return est;
  };

  std::vector<double> t(k, 0.0);
  std::optional<GEstimate> best;
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t sweeps = 0;
  bool converged = false;
  for (; sweeps < options.max_sweeps && !converged;) {
    ++sweeps;
    for (std::size_t j = 0; j < k; ++j) {
      double lo = -1.0;
      double hi = 1.0;
      for (std::size_t step = 0; step < options.max_bisection_steps; ++step) {
        t[j] = 0.5 * (lo + hi);
        const GEstimate est = decide(t, j);
        if (std::abs(est.g[j]) <= inner_tol) break;
        (est.g[j] > 0.0 ? hi : lo) = t[j];
      }
    }
    std::uint64_t budget = options.trials;
    GEstimate est = evaluate(t, budget);
    while (max_abs(est.g) > options.tol && max_abs(est.g) < options.tol + est.ci_half_width &&
           budget * 2 <= max_budget) {
      budget *= 2;
      est = evaluate(t, budget);
    }
    const double residual = max_abs(est.g);
    if (residual < best_residual) {
      best_residual = residual;
      best = std::move(est);
    }
    converged = best_residual <= options.tol;
  }

  const GEstimate& final_estimate = *best;
  const StabilityReport report = stability_report(final_estimate.histogram, options.beta);
  InstabilityCertificate cert;
  cert.status = converged ? InstabilityCertificate::Status::converged : InstabilityCertificate::Status::unconverged;
  cert.k = k;
  cert.t_star = final_estimate.t;
  cert.residual = best_residual;
  cert.distribution = witness_distribution(w, final_estimate.t);
  cert.g = final_estimate.g;
  cert.cell_frequencies = final_estimate.cell_frequencies;
  cert.other_frequency = final_estimate.other_frequency;
  cert.max_frequency = report.rho_hat;
  cert.modal = report.modal;
  cert.ci = report.ci_half_width;
  cert.bound = 1.0 / static_cast<double>(k + 1);
  cert.boundary_margin = margin;
  cert.sweeps = sweeps;
  cert.evaluations = evaluations;
  cert.trials = final_estimate.histogram.trials;
  cert.n = options.n;
  cert.damping = options.damping;
  cert.tol = options.tol;
  return cert;
}

}  // namespace stablab
