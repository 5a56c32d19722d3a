#include <doctest.h>

#include <atomic>
#include <cmath>

#include "stablab/booster.hpp"
#include "stablab/error.hpp"
#include "stablab/estimators.hpp"

using namespace stablab;

namespace {

constexpr Label P = Label::plus;
constexpr Label M = Label::minus;

Hypothesis pat(const char* p) { return Hypothesis::from_pattern(p); }

}  // namespace

TEST_SUITE("booster") {
  TEST_CASE("list size and margin") {
    const BoostParams a = boost_params(0.31, 0.1, 0.05, 1);
    CHECK(a.list_size == 3);
    CHECK(a.alpha == doctest::Approx(0.06).epsilon(1e-12));
    const BoostParams b = boost_params(0.5, 0.1, 0.05, 1);
    CHECK(b.list_size == 2);
    CHECK(b.alpha == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    const BoostParams c = boost_params(1.0, 0.1, 0.05, 1);
    CHECK(c.list_size == 1);
    CHECK(c.alpha == doctest::Approx(0.5).epsilon(1e-12));
    const BoostParams d = boost_params(0.25, 0.1, 0.05, 1);
    CHECK(d.list_size == 4);
    CHECK(d.alpha == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(boost_params(0.0, 0.1, 0.05, 1), ArgumentError);
    CHECK_THROWS_AS(boost_params(0.3, 0.0, 0.05, 1), ArgumentError);
    CHECK_THROWS_AS(boost_params(0.3, 0.1, 1.0, 1), ArgumentError);
  }

  TEST_CASE("property: rho lies in (1/(L+1), 1/L] for every tested rho") {
    for (int i = 1; i <= 1000; ++i) {
      const double rho = i / 1000.0;
      const BoostParams p = boost_params(rho, 0.1, 0.1, 1);
      CAPTURE(rho);
      CHECK(rho > 1.0 / double(p.list_size + 1));
      CHECK(rho <= 1.0 / double(p.list_size));
      CHECK(p.alpha > 0.0);
    }
  }

  TEST_CASE("batch count, holdout size and frequency threshold") {
    const BoostParams p = boost_params(0.31, 0.1, 0.05, 2);
    const double alpha = 0.31 - 0.25;
    CHECK(p.batches == static_cast<std::size_t>(std::ceil(8.0 * std::log(4.0 / 0.05) / (alpha * alpha))));
    CHECK(p.holdout_size == static_cast<std::size_t>(std::ceil(2.0 * std::log(4.0 * 4.0 / 0.05) / 0.01)));
    CHECK(p.prefix_size == 2 * p.batches);
    CHECK(p.sample_size() == p.prefix_size + p.holdout_size);
    CHECK(p.holdout_loss_bound() == doctest::Approx(0.15));
    BoostParams hundred = p;
    hundred.batches = 100;
    CHECK(hundred.frequency_threshold() == 28);
  }

  TEST_CASE("short samples are rejected") {
    const Domain d = Domain::numbered(2);
    const BoostParams p = boost_params(0.5, 0.2, 0.2, 1);
    const Learner a = boost(constant_learner(pat("++"), d), p);
    CHECK_THROWS_AS(a(Sample(p.sample_size() - 1, {0, P}), SeedKey(1)), ArgumentError);
    CHECK_FALSE(a(Sample(p.sample_size(), {0, P}), SeedKey(1)).fallback);
  }

  TEST_CASE("no frequent candidate gives the flagged fallback") {
    const Domain d = Domain::numbered(2);
    std::vector<std::pair<Hypothesis, double>> uniform;
    for (std::uint64_t m = 0; m < 4; ++m) uniform.emplace_back(Hypothesis(m, 2), 0.25);
    const BoostParams p = boost_params(0.9, 0.2, 0.2, 1);
    const Learner a = boost(fixed_law_learner(uniform, d), p, pat("--"));
    const Sample s(p.sample_size(), {0, P});
    const LearnerOutput out = a(s, SeedKey(3));
    CHECK(out.fallback);
    CHECK(out.hypothesis == pat("--"));
  }

  TEST_CASE("lossy frequent candidates are filtered by the holdout") {
    const Domain d = Domain::numbered(2);
    // "+-" wins half of the batches but errs on 30% of the distribution.
    const Learner inner = fixed_law_learner({{pat("++"), 0.5}, {pat("+-"), 0.5}}, d);
    const BoostParams p = boost_params(0.5, 0.1, 0.05, 1);
    const Learner a = boost(inner, p);
    const FiniteDistribution dist(d, {{{0, P}, 0.7}, {{1, P}, 0.3}});
    std::atomic<int> violations{0};
    MonteCarloOptions options;
    options.observer = [&](std::uint64_t, SampleView sample, const LearnerOutput& out) {
      if (!out.fallback && empirical_loss(out.hypothesis, sample.last(p.holdout_size)) > p.holdout_loss_bound()) {
        ++violations;
      }
    };
    const OutputHistogram h = output_histogram(a, dist, p.sample_size(), 200, SeedKey(4), options);
    CHECK(violations == 0);
    CHECK(h.frequency(pat("++")) == 1.0);
  }

  TEST_CASE("synthetic stable learner is boosted into its top list") {
    const Domain d = Domain::numbered(2);
    const Learner inner = fixed_law_learner({{pat("++"), 0.4}, {pat("+-"), 0.35}, {pat("-+"), 0.25}}, d);
    const BoostParams p = boost_params(0.25, 0.1, 0.05, 1);
    REQUIRE(p.list_size == 4);
    const Learner a = boost(inner, p);
    const FiniteDistribution dist(d, {{{0, P}, 0.5}, {{1, P}, 0.5}});
    const ExactDistribution law = exact_output_distribution(inner, dist, 1);
    const auto top = top_hypotheses(law, p.list_size);
    const std::uint64_t trials = 200;
    const OutputHistogram h = output_histogram(a, dist, p.sample_size(), trials, SeedKey(5));
    const double sigma = hoeffding_sigma(trials);
    CHECK(list_coverage(h, top) >= 1.0 - p.delta - 3.0 * sigma);
    CHECK(stability_report(h).rho_hat >= (1.0 - p.delta) / double(p.list_size) - 3.0 * sigma);
  }

  TEST_CASE("property: at most L hypotheses exceed 1/(L+1) in an exact law") {
    SplitMix64 rng(SeedKey(6));
    const Domain d = Domain::numbered(3);
    const FiniteDistribution dist(d, {{{0, M}, 1.0}});
    for (int i = 0; i < 200; ++i) {
      std::vector<std::pair<Hypothesis, double>> law;
      std::vector<double> w;
      double total = 0.0;
      const std::size_t support = 1 + uniform_below(rng, 8);
      for (std::size_t k = 0; k < support; ++k) total += w.emplace_back(exponential1(rng) + 1e-3);
      for (std::size_t k = 0; k < support; ++k) law.emplace_back(Hypothesis(k, 3), w[k] / total);
      law.back().second = 1.0;
      for (std::size_t k = 0; k + 1 < support; ++k) law.back().second -= law[k].second;
      const ExactDistribution exact = exact_output_distribution(fixed_law_learner(law, d), dist, 1);
      double rho = 0.0;
      for (const auto& [h, prob] : exact) rho = std::max(rho, prob);
      const BoostParams p = boost_params(rho, 0.1, 0.1, 1);
      std::size_t heavy = 0;
      for (const auto& [h, prob] : exact) heavy += prob > 1.0 / double(p.list_size + 1);
      CHECK(heavy <= p.list_size);
    }
  }
}
