#include "stablab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "distributions";

void check_hypothesis(const Hypothesis& h, const Domain& domain) {
  if (h.size() != domain.size()) {
    throw DomainMismatchError(kModule, "hypothesis over " + std::to_string(h.size()) +
                                           " points used with a domain of " +
                                           std::to_string(domain.size()));
  }
}

}  // namespace

bool example_less(const LabeledExample& a, const LabeledExample& b) noexcept {
  if (a.x != b.x) return a.x < b.x;
  return a.y == Label::plus && b.y == Label::minus;
}

FiniteDistribution::FiniteDistribution(Domain domain, std::vector<Atom> atoms)
    : domain_(std::move(domain)) {
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (atom.example.x >= domain_.size()) {
      throw DomainMismatchError(kModule, "atom point index " + std::to_string(atom.example.x) +
                                             " outside a domain of " +
                                             std::to_string(domain_.size()) + " points");
    }
    if (!(atom.mass >= 0.0) || !std::isfinite(atom.mass)) {
      throw ArgumentError(kModule, "atom masses must be finite and non-negative");
    }
    total += atom.mass;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ArgumentError(kModule, "atom masses sum to " + std::to_string(total) + ", not 1");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return example_less(a.example, b.example); });
  for (const auto& atom : atoms) {
    if (atom.mass == 0.0) continue;
    if (!atoms_.empty() && atoms_.back().example == atom.example) {
      atoms_.back().mass += atom.mass;
    } else {
      atoms_.push_back(atom);
    }
  }
  double running = 0.0;
  cumulative_.reserve(atoms_.size());
  for (auto& atom : atoms_) {
    if (total != 1.0) atom.mass /= total;
    running += atom.mass;
    cumulative_.push_back(running);
  }
}

FiniteDistribution FiniteDistribution::empirical(const Domain& domain, SampleView sample) {
  if (sample.empty()) throw ArgumentError(kModule, "empirical distribution of an empty sample");
  std::vector<Atom> atoms;
  atoms.reserve(sample.size());
  const double unit = 1.0 / static_cast<double>(sample.size());
  for (const auto& e : sample) atoms.push_back({e, unit});
  // Merge counts before normalizing so masses are exact count/n ratios.
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return example_less(a.example, b.example); });
  std::vector<Atom> merged;
  std::size_t run = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    ++run;
    if (i + 1 == atoms.size() || !(atoms[i + 1].example == atoms[i].example)) {
      merged.push_back({atoms[i].example,
                        static_cast<double>(run) / static_cast<double>(sample.size())});
      run = 0;
    }
  }
  return FiniteDistribution(domain, std::move(merged));
}

double FiniteDistribution::mass(const LabeledExample& e) const noexcept {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), e, [](const Atom& a, const LabeledExample& key) {
    return example_less(a.example, key);
  });
  return (it != atoms_.end() && it->example == e) ? it->mass : 0.0;
}

double FiniteDistribution::point_mass(PointIndex x) const noexcept {
  return mass({x, Label::plus}) + mass({x, Label::minus});
}

std::size_t FiniteDistribution::atom_for(double u) const noexcept {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return atoms_.size() - 1;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

bool is_realizable(const FiniteDistribution& d, const ConceptClass& c) {
  if (!(d.domain() == c.domain())) {
    throw DomainMismatchError(kModule, "distribution and class live on different domains");
  }
  return std::any_of(c.hypotheses().begin(), c.hypotheses().end(), [&](const Hypothesis& h) {
    return std::all_of(d.atoms().begin(), d.atoms().end(),
                       [&](const Atom& a) { return h(a.example.x) == a.example.y; });
  });
}

double population_loss(const Hypothesis& h, const FiniteDistribution& d) {
  check_hypothesis(h, d.domain());
  double loss = 0.0;
  for (const auto& atom : d.atoms()) {
    if (h(atom.example.x) != atom.example.y) loss += atom.mass;
  }
  return loss;
}

double empirical_loss(const Hypothesis& h, SampleView sample) {
  if (sample.empty()) throw ArgumentError(kModule, "empirical loss of an empty sample");
  std::size_t mistakes = 0;
  for (const auto& e : sample) {
    if (e.x >= h.size()) throw DomainMismatchError(kModule, "sample point outside hypothesis domain");
    if (h(e.x) != e.y) ++mistakes;
  }
  return static_cast<double>(mistakes) / static_cast<double>(sample.size());
}

Sample draw_sample(const FiniteDistribution& d, std::size_t n, SeedKey seed) {
  Sample sample;
  sample.reserve(n);
  if (n == 0) return sample;
  if (d.support_size() == 0) throw ArgumentError(kModule, "cannot sample from an empty distribution");
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) sample.push_back(d.atoms()[d.atom_for(uniform01(rng))].example);
  return sample;
}

double tv_distance(const FiniteDistribution& a, const FiniteDistribution& b) {
  std::map<std::pair<std::string, int>, double> diff;
  for (const auto& atom : a.atoms()) {
    diff[{a.domain().id(atom.example.x), to_int(atom.example.y)}] += atom.mass;
  }
  for (const auto& atom : b.atoms()) {
    diff[{b.domain().id(atom.example.x), to_int(atom.example.y)}] -= atom.mass;
  }
  double total = 0.0;
  for (const auto& [key, delta] : diff) total += std::abs(delta);
  return 0.5 * total;
}

PointCounts::PointCounts(std::size_t domain_size, SampleView sample)
    : plus(domain_size, 0), minus(domain_size, 0), total(sample.size()) {
  for (const auto& e : sample) {
    if (e.x >= domain_size) throw DomainMismatchError(kModule, "sample point outside the domain");
    ++(e.y == Label::plus ? plus : minus)[e.x];
  }
}

std::size_t PointCounts::mistakes(const Hypothesis& h) const noexcept {
  std::size_t wrong = 0;
  for (PointIndex x = 0; x < plus.size(); ++x) wrong += h(x) == Label::plus ? minus[x] : plus[x];
  return wrong;
}

}  // namespace stablab
