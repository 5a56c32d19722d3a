#include "stablab/booster.hpp"

#include <cmath>
#include <map>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "booster";

}  // namespace

std::size_t BoostParams::frequency_threshold() const noexcept {
  const double raw = (rho - alpha / 2.0) * static_cast<double>(batches);
  // Absorb representation error, e.g. (0.31 - 0.03) * 100 = 28.000000000000004.
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

BoostParams boost_params(double rho, double eps, double delta, std::size_t n0) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ArgumentError(kModule, "boost_params: rho must lie in (0, 1]");
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError(kModule, "boost_params: eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError(kModule, "boost_params: delta must lie in (0, 1)");
  if (n0 < 1) throw ArgumentError(kModule, "boost_params: n0 must be at least 1");

  auto list_size = static_cast<std::size_t>(std::floor(1.0 / rho));
  // Keep rho in (1/(L+1), 1/L] despite rounding in 1/rho.
  while (list_size > 1 && rho > 1.0 / static_cast<double>(list_size)) --list_size;
  while (rho <= 1.0 / static_cast<double>(list_size + 1)) ++list_size;

  BoostParams p;
  p.rho = rho;
  p.eps = eps;
  p.delta = delta;
  p.list_size = list_size;
  p.alpha = rho - 1.0 / static_cast<double>(list_size + 1);
  p.batches = static_cast<std::size_t>(std::ceil(8.0 * std::log(4.0 / delta) / (p.alpha * p.alpha)));
  p.batch_size = n0;
  p.prefix_size = p.batches * n0;
  p.holdout_size = static_cast<std::size_t>(
      std::ceil(2.0 * std::log(4.0 * static_cast<double>(list_size + 1) / delta) / (eps * eps)));
  return p;
}

Learner boost(const Learner& inner, const BoostParams& params, const Hypothesis& fallback) {
  if (fallback.size() != inner.domain().size()) {
    throw DomainMismatchError(kModule, "boost: fallback hypothesis has the wrong size");
  }
  if (params.batches < 1 || params.holdout_size < 1 || params.batch_size < 1) {
    throw ArgumentError(kModule, "boost: T, n0 and n2 must be positive");
  }

  auto evaluate = [inner, params, fallback](SampleView sample, SeedKey seed) {
    if (sample.size() < params.sample_size()) {
      throw ArgumentError(kModule, "boost: sample of " + std::to_string(sample.size()) +
                                       " examples, need n1 + n2 = " +
                                       std::to_string(params.sample_size()));
    }
    std::map<Hypothesis, std::size_t> wins;
    for (std::size_t b = 0; b < params.batches; ++b) {
      const auto batch = sample.subspan(b * params.batch_size, params.batch_size);
      ++wins[inner(batch, seed.child(b).child("batch")).hypothesis];
    }
    const auto holdout = sample.last(params.holdout_size);
    const std::size_t threshold = params.frequency_threshold();
    const Hypothesis* best = nullptr;
    std::size_t best_wins = 0;
    // Canonical map order plus a strict comparison gives the canonical tie-break.
    for (const auto& [h, count] : wins) {
      if (count < threshold || count <= best_wins) continue;
      if (empirical_loss(h, holdout) <= params.holdout_loss_bound()) {
        best = &h;
        best_wins = count;
      }
    }
    if (best == nullptr) return LearnerOutput{fallback, true};
    return LearnerOutput{*best, false};
  };

  std::optional<ConceptClass> proper;
  if (inner.proper()) {
    const auto& members = inner.proper_class()->hypotheses();
    std::vector<Hypothesis> all(members.begin(), members.end());
    if (!inner.proper_class()->contains(fallback)) all.push_back(fallback);
    proper = ConceptClass(inner.domain(), std::move(all));
  }

  return Learner({
      .name = "boost(" + inner.name() + ")",
      .domain = inner.domain(),
      .evaluate = std::move(evaluate),
      .sample_size = [params](double, double) { return params.sample_size(); },
      .deterministic = false,
      .proper_class = std::move(proper),
  });
}

Learner boost(const Learner& inner, const BoostParams& params) {
  return boost(inner, params, Hypothesis::all_plus(inner.domain().size()));
}

}  // namespace stablab
