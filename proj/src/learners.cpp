#include "stablab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "learners";

void require_accuracy(double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ArgumentError(kModule, std::string(what) + ": eps must lie in (0, 1)");
  }
}

void require_nonempty(SampleView sample, const std::string& who) {
  if (sample.empty()) throw ArgumentError(kModule, who + ": empty sample");
}

std::size_t hoeffding_size(double deviation, double failure) {
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / failure) / (2.0 * deviation * deviation)));
}

OutputLaw merge_law(OutputLaw law) {
  std::sort(law.begin(), law.end(), [](const auto& a, const auto& b) {
    if (a.first.hypothesis != b.first.hypothesis) return a.first.hypothesis < b.first.hypothesis;
    return a.first.fallback < b.first.fallback;
  });
  OutputLaw merged;
  for (auto& entry : law) {
    if (!merged.empty() && merged.back().first == entry.first) {
      merged.back().second += entry.second;
    } else {
      merged.push_back(std::move(entry));
    }
  }
  return merged;
}

}  // namespace

Learner::Learner(Parts parts) : parts_(std::move(parts)) {
  if (!parts_.evaluate) throw ArgumentError(kModule, "learner '" + parts_.name + "' has no evaluate function");
}

LearnerOutput Learner::operator()(SampleView sample, SeedKey seed) const {
  return parts_.evaluate(sample, seed);
}

bool Learner::has_output_law() const noexcept {
  return static_cast<bool>(parts_.law) || parts_.deterministic;
}

OutputLaw Learner::output_law(SampleView sample) const {
  if (parts_.law) return parts_.law(sample);
  if (parts_.deterministic) return {{parts_.evaluate(sample, SeedKey{}), 1.0}};
  throw ArgumentError(kModule, "learner '" + parts_.name + "' exposes no exact output law");
}

std::size_t Learner::sample_size(double eps, double delta) const {
  if (!parts_.sample_size) {
    throw ArgumentError(kModule, "learner '" + parts_.name + "' has no sample-size rule");
  }
  return parts_.sample_size(eps, delta);
}

ConceptClass Learner::output_class() const {
  if (parts_.proper_class) return *parts_.proper_class;
  return make_cube(parts_.domain.size());
}

// ---------------------------------------------------------------------------

Learner erm_learner(const ConceptClass& c) {
  if (c.empty()) throw ArgumentError(kModule, "erm_learner: empty concept class");
  auto evaluate = [c](SampleView sample, SeedKey) {
    require_nonempty(sample, "erm");
    const PointCounts counts(c.domain().size(), sample);
    std::size_t best = 0;
    std::size_t best_mistakes = counts.mistakes(c[0]);
    for (std::size_t i = 1; i < c.size() && best_mistakes > 0; ++i) {
      const std::size_t m = counts.mistakes(c[i]);
      if (m < best_mistakes) {
        best = i;
        best_mistakes = m;
      }
    }
    return LearnerOutput{c[best], false};
  };
  const double log_size = std::log(static_cast<double>(c.size()));
  return Learner({
      .name = "erm",
      .domain = c.domain(),
      .evaluate = std::move(evaluate),
      // Realizable consistent-learner bound (ln|C| + ln(1/delta)) / eps.
      .sample_size = [log_size](double eps, double delta) {
        return static_cast<std::size_t>(std::ceil((log_size + std::log(1.0 / delta)) / eps));
      },
      .deterministic = true,
      .proper_class = c,
  });
}

Learner cube_learner(std::size_t d, double eps) {
  require_accuracy(eps, "cube_learner");
  if (d < 1 || d > kMaxDomainSize) throw ArgumentError(kModule, "cube_learner: d out of range");
  const double cutoff_max = eps / (2.0 * static_cast<double>(d));

  auto frequencies = [d](const PointCounts& counts) {
    std::vector<double> freq(d);
    for (std::size_t x = 0; x < d; ++x) {
      if (counts.plus[x] > 0 && counts.minus[x] > 0) {
        throw RealizabilityError(kModule, "cube_learner: point " + std::to_string(x + 1) +
                                              " appears with both labels");
      }
      freq[x] = static_cast<double>(counts.plus[x] + counts.minus[x]) /
                static_cast<double>(counts.total);
    }
    return freq;
  };
  auto output_for = [d](const PointCounts& counts, const std::vector<double>& freq, double kappa) {
    Hypothesis h = Hypothesis::all_plus(d);
    for (PointIndex x = 0; x < d; ++x) {
      if (freq[x] >= kappa && counts.minus[x] > 0) h = h.with_label(x, Label::minus);
    }
    return h;
  };

  auto evaluate = [=](SampleView sample, SeedKey seed) {
    require_nonempty(sample, "cube_learner");
    const PointCounts counts(d, sample);
    const auto freq = frequencies(counts);
    SplitMix64 rng(seed.child("kappa"));
    const double kappa = uniform01(rng) * cutoff_max;
    return LearnerOutput{output_for(counts, freq, kappa), false};
  };

  // The output only changes when kappa crosses an observed frequency, so the
  // law is a finite mixture over the sub-intervals of [0, eps/(2d)].
  auto law = [=](SampleView sample) {
    require_nonempty(sample, "cube_learner");
    const PointCounts counts(d, sample);
    const auto freq = frequencies(counts);
    std::vector<double> cuts{0.0, cutoff_max};
    for (double f : freq) {
      if (f > 0.0 && f < cutoff_max) cuts.push_back(f);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    OutputLaw out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      out.push_back({{output_for(counts, freq, cuts[i + 1]), false},
                     (cuts[i + 1] - cuts[i]) / cutoff_max});
    }
    return merge_law(std::move(out));
  };

  return Learner({
      .name = "cube",
      .domain = Domain::numbered(d),
      .evaluate = std::move(evaluate),
      .law = std::move(law),
      // Marginals within delta*eps/(16d) of the truth with probability 1 - delta/2.
      .sample_size = [d](double e, double delta) {
        const double dev = delta * e / (16.0 * static_cast<double>(d));
        return hoeffding_size(dev, delta / (2.0 * static_cast<double>(d)));
      },
      .deterministic = false,
  });
}

std::vector<double> threshold_cutoffs(std::size_t t, double eps) {
  std::vector<double> sigma(t);
  for (std::size_t i = 1; i <= t; ++i) sigma[i - 1] = eps / (2.0 * static_cast<double>(t - i + 1));
  return sigma;
}

Learner threshold_learner(std::size_t t, double eps) {
  require_accuracy(eps, "threshold_learner");
  if (t < 3) throw ArgumentError(kModule, "threshold_learner: t must be at least 3");
  const auto sigma = threshold_cutoffs(t, eps);
  const double gap = eps / (10.0 * static_cast<double>(t * t));
  for (std::size_t i = 0; i + 1 < t; ++i) {
    if (sigma[i + 1] < sigma[i] + gap) {
      throw std::logic_error("threshold cutoffs are not separated by eps/(10 t^2)");
    }
  }
  const ConceptClass taus = make_thresholds(t);

  auto evaluate = [taus, sigma, t](SampleView sample, SeedKey) {
    require_nonempty(sample, "threshold_learner");
    const PointCounts counts(t - 1, sample);
    const double n = static_cast<double>(sample.size());
    // tau_1 is all-plus; moving to tau_{i+1} flips point i (value i) to -.
    std::size_t mistakes = std::accumulate(counts.minus.begin(), counts.minus.end(), std::size_t{0});
    for (std::size_t i = 1; i <= t; ++i) {
      if (static_cast<double>(mistakes) / n < sigma[i - 1]) return LearnerOutput{taus[i - 1], false};
      if (i < t) mistakes = mistakes - counts.minus[i - 1] + counts.plus[i - 1];
    }
    return LearnerOutput{taus[t - 1], true};
  };

  return Learner({
      .name = "thresholds",
      .domain = taus.domain(),
      .evaluate = std::move(evaluate),
      .sample_size = [t](double e, double delta) {
        const double dev = e / (40.0 * static_cast<double>(t * t));
        return hoeffding_size(dev, delta / (4.0 * static_cast<double>(t)));
      },
      .deterministic = true,
      .proper_class = taus,
  });
}

Learner empiricalize(const Learner& inner, const ConceptClass& c, double eps, double delta) {
  if (c.empty()) throw ArgumentError(kModule, "empiricalize: empty concept class");
  if (!(inner.domain() == c.domain())) {
    throw DomainMismatchError(kModule, "empiricalize: learner and class domains differ");
  }
  const double budget = eps + delta;
  const Learner erm = erm_learner(c);

  auto repair = [erm, budget](SampleView sample, LearnerOutput out) {
    if (empirical_loss(out.hypothesis, sample) <= budget) return out;
    LearnerOutput replacement = erm(sample, SeedKey{});
    if (!(empirical_loss(replacement.hypothesis, sample) < budget)) {
      throw EmpiricalViolationError(kModule, "empiricalize: no hypothesis in the class has "
                                             "empirical loss below eps + delta");
    }
    return replacement;
  };

  Learner::LawFn law;
  if (inner.has_output_law()) {
    law = [inner, repair](SampleView sample) {
      OutputLaw out = inner.output_law(sample);
      for (auto& entry : out) entry.first = repair(sample, entry.first);
      return merge_law(std::move(out));
    };
  }

  std::optional<ConceptClass> proper;
  if (inner.proper()) {
    std::vector<Hypothesis> members(c.hypotheses().begin(), c.hypotheses().end());
    for (const auto& h : inner.proper_class()->hypotheses()) {
      if (!c.contains(h)) members.push_back(h);
    }
    proper = ConceptClass(c.domain(), std::move(members));
  }

  return Learner({
      .name = "empirical(" + inner.name() + ")",
      .domain = c.domain(),
      .evaluate = [inner, repair](SampleView sample, SeedKey seed) {
        return repair(sample, inner(sample, seed));
      },
      .law = std::move(law),
      .sample_size = inner.has_sample_size()
                         ? Learner::SampleSizeFn([inner](double e, double d) { return inner.sample_size(e, d); })
                         : Learner::SampleSizeFn{},
      .deterministic = inner.deterministic(),
      .proper_class = std::move(proper),
  });
}

Learner coloring_learner(Coloring color, const Domain& domain, std::size_t n) {
  if (!color) throw ArgumentError(kModule, "coloring_learner: empty colouring");
  return Learner({
      .name = "coloring",
      .domain = domain,
      .evaluate = [color = std::move(color), domain](SampleView sample, SeedKey) {
        require_nonempty(sample, "coloring");
        return LearnerOutput{color(FiniteDistribution::empirical(domain, sample)), false};
      },
      .sample_size = [n](double, double) { return n; },
      .deterministic = true,
  });
}

Coloring erm_coloring(const ConceptClass& c) {
  if (c.empty()) throw ArgumentError(kModule, "erm_coloring: empty concept class");
  return [c](const FiniteDistribution& d) {
    std::vector<double> losses;
    losses.reserve(c.size());
    for (const auto& h : c.hypotheses()) losses.push_back(population_loss(h, d));
    const double best = *std::min_element(losses.begin(), losses.end());
    // Losses are sums of count/n ratios; treat rounding-level gaps as ties.
    for (std::size_t i = 0; i < losses.size(); ++i) {
      if (losses[i] <= best + 1e-12) return c[i];
    }
    return c[0];
  };
}

Learner fixed_law_learner(std::vector<std::pair<Hypothesis, double>> law, const Domain& domain) {
  if (law.empty()) throw ArgumentError(kModule, "fixed_law_learner: empty law");
  double total = 0.0;
  for (const auto& [h, w] : law) {
    if (h.size() != domain.size()) throw DomainMismatchError(kModule, "fixed_law_learner: hypothesis size");
    if (!(w > 0.0)) throw ArgumentError(kModule, "fixed_law_learner: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError(kModule, "fixed_law_learner: weights must sum to 1");
  std::vector<double> cumulative;
  double running = 0.0;
  for (const auto& entry : law) cumulative.push_back(running += entry.second);

  OutputLaw exact;
  for (const auto& [h, w] : law) exact.push_back({{h, false}, w});
  exact = merge_law(std::move(exact));
  const bool single = exact.size() == 1;

  return Learner({
      .name = single ? "constant" : "fixed-law",
      .domain = domain,
      .evaluate = [law, cumulative](SampleView, SeedKey seed) {
        SplitMix64 rng(seed.child("law"));
        const double u = uniform01(rng) * cumulative.back();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t i = it == cumulative.end() ? law.size() - 1 : static_cast<std::size_t>(it - cumulative.begin());
        return LearnerOutput{law[i].first, false};
      },
      .law = [exact](SampleView) { return exact; },
      .deterministic = single,
  });
}

Learner constant_learner(const Hypothesis& h, const Domain& domain) {
  return fixed_law_learner({{h, 1.0}}, domain);
}

std::vector<Hypothesis> cube_candidate_list(const FiniteDistribution& d) {
  const std::size_t size = d.domain().size();
  std::vector<PointIndex> order(size);
  std::iota(order.begin(), order.end(), PointIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](PointIndex a, PointIndex b) {
    return d.point_mass(a) > d.point_mass(b);
  });
  std::vector<Hypothesis> list;
  Hypothesis h = Hypothesis::all_plus(size);
  for (PointIndex x : order) {
    const double plus = d.mass({x, Label::plus});
    const double minus = d.mass({x, Label::minus});
    if (minus > plus) h = h.with_label(x, Label::minus);
    list.push_back(h);
  }
  return list;
}

}  // namespace stablab
