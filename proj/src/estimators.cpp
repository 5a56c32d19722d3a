#include "stablab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "stablab/error.hpp"

namespace stablab {

namespace {

constexpr const char* kModule = "estimators";

// Splits [first, last) into contiguous chunks, one per thread, and runs
// body(chunk, begin, end). Chunk results are merged by the caller in chunk
// order, so the outcome does not depend on the thread count.
template <typename Body>
void run_chunks(std::uint64_t first, std::uint64_t last, unsigned threads, Body&& body) {
  const std::uint64_t total = last - first;
  const unsigned workers = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(std::max(threads, 1U), total)));
  if (workers == 1) {
    body(0U, first, last);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = first + total * w / workers;
    const std::uint64_t end = first + total * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename Fn>
auto with_trial_context(std::uint64_t trial, Fn&& fn) {
  try {
    return fn();
  } catch (Error& e) {
    e.add_context("trial " + std::to_string(trial));
    throw;
  }
}

Estimate pair_agreement(const Learner& a, const FiniteDistribution& d, std::size_t n,
                        std::uint64_t trials, SeedKey seed, const MonteCarloOptions& options,
                        double beta, bool shared) {
  if (trials == 0) throw ArgumentError(kModule, "replicability estimate needs trials >= 1");
  const unsigned workers = std::max(options.threads, 1U);
  std::vector<std::uint64_t> agreements(workers, 0);
  run_chunks(0, trials, workers, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      const SeedKey trial = seed.child(i);
      const bool agree = with_trial_context(i, [&] {
        const Sample s1 = draw_sample(d, n, trial.child("sample"));
        const Sample s2 = draw_sample(d, n, trial.child("sample-prime"));
        const SeedKey r1 = trial.child("learner");
        const SeedKey r2 = shared ? r1 : trial.child("learner-prime");
        return a(s1, r1).hypothesis == a(s2, r2).hypothesis;
      });
      if (agree) ++agreements[chunk];
    }
  });
  std::uint64_t total = 0;
  for (auto v : agreements) total += v;
  return {static_cast<double>(total) / static_cast<double>(trials), hoeffding_half_width(trials, beta)};
}

}  // namespace

void OutputHistogram::add(const LearnerOutput& out) {
  ++counts[out.hypothesis];
  ++trials;
  if (out.fallback) ++fallbacks;
}

void OutputHistogram::merge(const OutputHistogram& other) {
  if (other.trials == 0) return;
  if (trials != 0 && (other.n != n || !(other.seed == seed))) {
    throw ArgumentError(kModule, "cannot merge histograms with different n or seed stream");
  }
  for (const auto& [h, c] : other.counts) counts[h] += c;
  trials += other.trials;
  fallbacks += other.fallbacks;
  n = other.n;
  seed = other.seed;
}

double OutputHistogram::frequency(const Hypothesis& h) const {
  if (trials == 0) return 0.0;
  auto it = counts.find(h);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

double hoeffding_half_width(std::uint64_t trials, double beta) {
  return std::sqrt(std::log(2.0 / beta) / (2.0 * static_cast<double>(trials)));
}

double hoeffding_sigma(std::uint64_t trials, std::size_t m) {
  return std::sqrt(std::log(2.0 * static_cast<double>(m)) / (2.0 * static_cast<double>(trials)));
}

OutputHistogram output_histogram_range(const Learner& a, const FiniteDistribution& d,
                                       std::size_t n, std::uint64_t first, std::uint64_t last,
                                       SeedKey seed, const MonteCarloOptions& options) {
  if (last < first) throw ArgumentError(kModule, "trial range is reversed");
  const unsigned workers = std::max(options.threads, 1U);
  std::vector<OutputHistogram> partial(workers);
  run_chunks(first, last, workers, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
    OutputHistogram& local = partial[chunk];
    local.n = n;
    local.seed = seed;
    for (std::uint64_t i = begin; i < end; ++i) {
      const SeedKey trial = seed.child(i);
      with_trial_context(i, [&] {
        const Sample sample = draw_sample(d, n, trial.child("sample"));
        const LearnerOutput out = a(sample, trial.child("learner"));
        if (options.observer) options.observer(i, sample, out);
        local.add(out);
      });
    }
  });
  OutputHistogram result;
  result.n = n;
  result.seed = seed;
  for (const auto& p : partial) result.merge(p);
  return result;
}

OutputHistogram output_histogram(const Learner& a, const FiniteDistribution& d, std::size_t n,
                                 std::uint64_t trials, SeedKey seed,
                                 const MonteCarloOptions& options) {
  if (trials == 0) throw ArgumentError(kModule, "output_histogram needs trials >= 1");
  return output_histogram_range(a, d, n, 0, trials, seed, options);
}

StabilityReport stability_report(const OutputHistogram& h, double beta) {
  if (h.trials == 0) throw ArgumentError(kModule, "stability_report of an empty histogram");
  // Integer numerators over a common denominator keep
  // rho >= collision >= rho^2 exact after rounding.
  std::uint64_t max_count = 0;
  std::uint64_t square_sum = 0;
  Hypothesis modal;
  for (const auto& [hyp, c] : h.counts) {
    if (c > max_count) {
      max_count = c;
      modal = hyp;
    }
    square_sum += c * c;
  }
  const double t = static_cast<double>(h.trials);
  const double t2 = t * t;
  StabilityReport report;
  report.rho_hat = static_cast<double>(max_count * h.trials) / t2;
  report.collision_hat = static_cast<double>(square_sum) / t2;
  report.modal = modal;
  report.ci_half_width = hoeffding_half_width(h.trials, beta);
  report.trials = h.trials;
  report.n = h.n;
  return report;
}

Estimate shared_randomness_replicability(const Learner& a, const FiniteDistribution& d,
                                         std::size_t n, std::uint64_t trials, SeedKey seed,
                                         const MonteCarloOptions& options, double beta) {
  return pair_agreement(a, d, n, trials, seed, options, beta, true);
}

Estimate independent_replicability(const Learner& a, const FiniteDistribution& d, std::size_t n,
                                   std::uint64_t trials, SeedKey seed,
                                   const MonteCarloOptions& options, double beta) {
  return pair_agreement(a, d, n, trials, seed, options, beta, false);
}

ExactDistribution exact_output_distribution(const Learner& a, const FiniteDistribution& d,
                                            std::size_t n, std::uint64_t max_samples) {
  if (!a.has_output_law()) {
    throw ArgumentError(kModule, "exact_output_distribution: learner '" + a.name() +
                                     "' has no exact output law");
  }
  const std::size_t m = d.support_size();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (m != 0 && count > max_samples / m) {
      throw SizeError(kModule, "exact_output_distribution: " + std::to_string(m) + "^" +
                                   std::to_string(n) + " samples exceed the budget of " +
                                   std::to_string(max_samples));
    }
    count *= m;
  }
  if (m == 0) throw ArgumentError(kModule, "exact_output_distribution: empty distribution");

  ExactDistribution result;
  std::vector<std::size_t> digits(n, 0);
  Sample sample(n);
  const auto atoms = d.atoms();
  for (std::uint64_t s = 0; s < count; ++s) {
    double probability = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      sample[i] = atoms[digits[i]].example;
      probability *= atoms[digits[i]].mass;
    }
    for (const auto& [out, w] : a.output_law(sample)) result[out.hypothesis] += probability * w;
    for (std::size_t i = 0; i < n; ++i) {
      if (++digits[i] < m) break;
      digits[i] = 0;
    }
  }
  return result;
}

double list_coverage(const OutputHistogram& h, std::span<const Hypothesis> list) {
  if (h.trials == 0) return 0.0;
  std::uint64_t covered = 0;
  for (const auto& [hyp, c] : h.counts) {
    if (std::find(list.begin(), list.end(), hyp) != list.end()) covered += c;
  }
  return static_cast<double>(covered) / static_cast<double>(h.trials);
}

double list_coverage(const ExactDistribution& p, std::span<const Hypothesis> list) {
  double covered = 0.0;
  for (const auto& [hyp, prob] : p) {
    if (std::find(list.begin(), list.end(), hyp) != list.end()) covered += prob;
  }
  return covered;
}

namespace {

template <typename Map>
std::vector<Hypothesis> top_keys(const Map& map, std::size_t size) {
  std::vector<std::pair<Hypothesis, typename Map::mapped_type>> entries(map.begin(), map.end());
  // Map iteration is canonical, so a stable sort keeps canonical tie-breaks.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<Hypothesis> out;
  for (std::size_t i = 0; i < entries.size() && i < size; ++i) out.push_back(entries[i].first);
  return out;
}

}  // namespace

std::vector<Hypothesis> top_hypotheses(const ExactDistribution& p, std::size_t size) {
  return top_keys(p, size);
}

std::vector<Hypothesis> top_hypotheses(const OutputHistogram& h, std::size_t size) {
  return top_keys(h.counts, size);
}

}  // namespace stablab
