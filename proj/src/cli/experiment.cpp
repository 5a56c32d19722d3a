#include "stablab/cli/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "stablab/adversary.hpp"
#include "stablab/booster.hpp"
#include "stablab/cli/learner_spec.hpp"
#include "stablab/error.hpp"
#include "stablab/estimators.hpp"

namespace stablab::cli {

namespace {

constexpr const char* kModule = "cli";

[[noreturn]] void config_error(const std::string& message) { throw ConfigError(kModule, message); }

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const std::string& command, std::vector<std::string> columns) : columns_(columns.size()) {
    text_ = fmt::format("# stability-lab {} report v{}; columns: {}\n", command, kReportVersion,
                        fmt::join(columns, ","));
    text_ += fmt::format("{}\n", fmt::join(columns, ","));
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    static_assert(sizeof...(Fields) > 0);
    std::vector<std::string> cells{cell(fields)...};
    if (cells.size() != columns_) throw std::logic_error("csv row width");
    text_ += fmt::format("{}\n", fmt::join(cells, ","));
  }

  const std::string& text() const noexcept { return text_; }

 private:
  static std::string cell(const std::string& v) { return csv_field(v); }
  static std::string cell(const char* v) { return csv_field(v); }
  template <typename T>
  static std::string cell(const T& v) {
    return fmt::format("{}", v);
  }

  std::size_t columns_;
  std::string text_;
};

Json report_header(const std::string& command, const ExperimentConfig& config) {
  Json j;
  j["version"] = kReportVersion;
  j["command"] = command;
  if (config.seed) j["seed"] = *config.seed;
  return j;
}

std::string render(const Json& j) { return j.dump(2) + "\n"; }

std::uint64_t require_seed(const ExperimentConfig& config) {
  if (!config.seed) config_error(config.command + ": --seed is required (no wall-clock seeding)");
  return *config.seed;
}

std::optional<ConceptClass> optional_class(const ExperimentConfig& config) {
  if (config.class_spec.empty()) return std::nullopt;
  return load_class(config.class_spec);
}

const std::string& require(const std::string& value, const std::string& command, const char* flag) {
  if (value.empty()) config_error(command + ": " + flag + " is required");
  return value;
}

std::size_t sample_size(const Learner& a, const ExperimentConfig& config) {
  if (config.n > 0) return config.n;
  if (!a.has_sample_size()) config_error(config.command + ": --n is required for learner '" + a.name() + "'");
  return a.sample_size(config.eps, config.delta);
}

Report run_dims(const ExperimentConfig& config) {
  const ConceptClass c = load_class(require(config.class_spec, "dims", "--class"));
  const std::size_t vc = vc_dimension(c);
  const std::size_t ldim = littlestone_dimension(c);
  const std::size_t star = hollow_star_number(c, std::min<std::size_t>(c.domain().size(), 10));

  CsvWriter csv("dims", {"class", "points", "size", "vc", "ldim", "hollow_star"});
  csv.row(config.class_spec, c.domain().size(), c.size(), vc, ldim, star);
  Json j = report_header("dims", config);
  j["class"] = config.class_spec;
  j["points"] = c.domain().size();
  j["size"] = c.size();
  j["vc"] = vc;
  j["ldim"] = ldim;
  j["hollow_star"] = star;
  return {csv.text(), render(j)};
}

// Shared by estimate and boost: one histogram per distribution.
void estimate_rows(const Learner& a, const std::vector<NamedDistribution>& dists, std::size_t n,
                   const ExperimentConfig& config, SeedKey root, std::size_t list_size, CsvWriter& csv,
                   Json& rows) {
  const MonteCarloOptions options{config.threads, {}};
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const auto& [name, d] = dists[i];
    const OutputHistogram h = output_histogram(a, d, n, config.trials, root.child(i), options);
    const StabilityReport r = stability_report(h);
    csv.row(a.name(), name, n, config.trials, r.rho_hat, r.collision_hat, r.ci_half_width, r.modal.pattern());
    Json row;
    row["learner"] = a.name();
    row["distribution"] = name;
    row["n"] = n;
    row["trials"] = config.trials;
    row["rho_hat"] = r.rho_hat;
    row["collision_hat"] = r.collision_hat;
    row["ci"] = r.ci_half_width;
    row["modal_id"] = r.modal.pattern();
    row["fallbacks"] = h.fallbacks;
    if (list_size > 0) {
      const auto top = top_hypotheses(h, list_size);
      row["top_list"] = Json::array();
      for (const auto& t : top) row["top_list"].push_back(t.pattern());
      row["top_list_coverage"] = list_coverage(h, top);
    }
    Json histogram = Json::array();
    for (const auto& [hyp, count] : h.counts) histogram.push_back(Json{{"h", hyp.pattern()}, {"count", count}});
    row["histogram"] = std::move(histogram);
    rows.push_back(std::move(row));
  }
}

const std::vector<std::string> kEstimateColumns = {"learner", "distribution", "n",  "trials",
                                                   "rho_hat", "collision_hat", "ci", "modal_id"};

Report run_estimate(const ExperimentConfig& config) {
  const std::uint64_t seed = require_seed(config);
  const auto c = optional_class(config);
  const Learner a = make_learner(require(config.learner_spec, "estimate", "--learner"), c);
  const auto dists = load_distributions(require(config.dist_spec, "estimate", "--dist"), c);
  const std::size_t n = sample_size(a, config);

  CsvWriter csv("estimate", kEstimateColumns);
  Json j = report_header("estimate", config);
  j["rows"] = Json::array();
  estimate_rows(a, dists, n, config, SeedKey(seed).child("estimate"), 0, csv, j["rows"]);
  return {csv.text(), render(j)};
}

Report run_boost(const ExperimentConfig& config) {
  const std::uint64_t seed = require_seed(config);
  const auto c = optional_class(config);
  const Learner inner = make_learner(require(config.learner_spec, "boost", "--learner"), c);
  const auto dists = load_distributions(require(config.dist_spec, "boost", "--dist"), c);
  if (!(config.rho > 0.0)) config_error("boost: --rho is required and must be positive");
  const BoostParams p = boost_params(config.rho, config.eps, config.delta, config.n0);
  const Learner a = boost(inner, p);

  CsvWriter csv("boost", kEstimateColumns);
  Json j = report_header("boost", config);
  j["params"] = Json{{"rho", p.rho},
                     {"eps", p.eps},
                     {"delta", p.delta},
                     {"list_size", p.list_size},
                     {"alpha", p.alpha},
                     {"batches", p.batches},
                     {"batch_size", p.batch_size},
                     {"prefix_size", p.prefix_size},
                     {"holdout_size", p.holdout_size},
                     {"frequency_threshold", p.frequency_threshold()},
                     {"holdout_loss_bound", p.holdout_loss_bound()}};
  j["rows"] = Json::array();
  estimate_rows(a, dists, p.sample_size(), config, SeedKey(seed).child("boost"), p.list_size, csv, j["rows"]);
  return {csv.text(), render(j)};
}

InstabilityWitness choose_witness(const ExperimentConfig& config, const ConceptClass& c) {
  if (!config.witness_path.empty()) return witness_from_json(read_json_file(config.witness_path), c.domain());
  const auto colon = config.class_spec.find(':');
  const std::string kind = colon == std::string::npos ? std::string() : config.class_spec.substr(0, colon);
  if (kind == "cube") return cube_witness(c.domain().size());
  const std::size_t s = hollow_star_number(c, std::min<std::size_t>(c.domain().size(), 10));
  if (s < 3) config_error("adversary: no built-in witness for this class; pass --witness FILE");
  return hollow_star_witness(c, find_hollow_star(c, s)->points);
}

Report run_adversary(const ExperimentConfig& config) {
  const std::uint64_t seed = require_seed(config);
  const ConceptClass c = load_class(require(config.class_spec, "adversary", "--class"));
  const Learner a = make_learner(require(config.learner_spec, "adversary", "--learner"), c);
  const InstabilityWitness w = choose_witness(config, c);
  const ConceptClass f = a.output_class();

  SolverOptions options;
  options.damping = config.damping;
  if (config.n > 0) options.n = config.n;
  options.trials = config.trials;
  options.tol = config.tol;
  options.max_sweeps = config.max_sweeps;
  options.threads = config.threads;
  const InstabilityCertificate cert = find_hard_distribution(a, w, c, f, options, SeedKey(seed).child("adversary"));

  CsvWriter csv("adversary", {"learner", "status", "k", "residual", "max_frequency", "bound", "ci", "trials", "n"});
  csv.row(a.name(), to_string(cert.status), cert.k, cert.residual, cert.max_frequency, cert.bound, cert.ci,
          cert.trials, cert.n);
  Json j = report_header("adversary", config);
  j["learner"] = a.name();
  j["witness"] = witness_to_json(w);
  j["certificate"] = certificate_to_json(cert);
  const int code = cert.status == InstabilityCertificate::Status::converged ? kExitOk : kExitUnconverged;
  return {csv.text(), render(j), code};
}

Report run_oracle(const ExperimentConfig& config) {
  const auto c = optional_class(config);
  const Learner a = make_learner(require(config.learner_spec, "oracle", "--learner"), c);
  const auto dists = load_distributions(require(config.dist_spec, "oracle", "--dist"), c);
  const std::size_t n = sample_size(a, config);

  CsvWriter csv("oracle", {"distribution", "hypothesis", "probability"});
  Json j = report_header("oracle", config);
  j["learner"] = a.name();
  j["n"] = n;
  j["rows"] = Json::array();
  for (const auto& [name, d] : dists) {
    const ExactDistribution p = exact_output_distribution(a, d, n);
    double max_p = 0.0;
    double collision = 0.0;
    Json law = Json::array();
    for (const auto& [h, prob] : p) {
      csv.row(name, h.pattern(), prob);
      law.push_back(Json{{"h", h.pattern()}, {"p", prob}});
      max_p = std::max(max_p, prob);
      collision += prob * prob;
    }
    j["rows"].push_back(Json{{"distribution", name},
                             {"max_probability", max_p},
                             {"collision_probability", collision},
                             {"max_probability_squared", max_p * max_p},
                             {"law", std::move(law)}});
  }
  return {csv.text(), render(j)};
}

template <typename T>
void read_key(const Json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const Json::exception&) {
    config_error(std::string("experiment config: key '") + key + "' has the wrong type");
  }
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  if (config.command == "dims") return run_dims(config);
  if (config.command == "estimate") return run_estimate(config);
  if (config.command == "boost") return run_boost(config);
  if (config.command == "adversary") return run_adversary(config);
  if (config.command == "oracle") return run_oracle(config);
  config_error("unknown command '" + config.command + "'");
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) config_error("experiment config: expected a JSON object");
  static const std::vector<std::string> known = {"command", "class", "learner", "dist", "witness", "n",
                                                 "trials", "eps", "delta", "rho", "n0", "tol",
                                                 "damping", "max-sweeps", "seed", "threads", "out"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error("experiment config: unknown key '" + key + "'");
    }
  }
  ExperimentConfig c;
  read_key(j, "command", c.command);
  read_key(j, "class", c.class_spec);
  read_key(j, "learner", c.learner_spec);
  read_key(j, "dist", c.dist_spec);
  read_key(j, "witness", c.witness_path);
  read_key(j, "n", c.n);
  read_key(j, "trials", c.trials);
  read_key(j, "eps", c.eps);
  read_key(j, "delta", c.delta);
  read_key(j, "rho", c.rho);
  read_key(j, "n0", c.n0);
  read_key(j, "tol", c.tol);
  read_key(j, "damping", c.damping);
  read_key(j, "max-sweeps", c.max_sweeps);
  read_key(j, "threads", c.threads);
  read_key(j, "out", c.out);
  if (j.contains("seed")) {
    std::uint64_t seed = 0;
    read_key(j, "seed", seed);
    c.seed = seed;
  }
  if (c.command.empty()) config_error("experiment config: key 'command' is required");
  return c;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const SizeError*>(&e)) return kExitSize;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainMismatchError*>(&e)) {
    return kExitConfig;
  }
  return kExitFailure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability and replicability experiments on finite concept classes", "stability-lab"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::string config_path;

  auto common = [&](CLI::App* sub, bool randomized) {
    auto* opt = sub->add_option("--seed", seed, "Experiment seed");
    if (randomized) opt->required();
    sub->add_option("--threads", config.threads, "Worker threads (reports do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", config.out, "Write PREFIX.csv and PREFIX.json instead of printing the CSV");
  };

  auto* dims = app.add_subcommand("dims", "VC, Littlestone and hollow star dimensions of a class");
  dims->add_option("--class", config.class_spec, "cube:D, thresholds:T, singletons:S or a class file")->required();
  common(dims, false);

  auto* estimate = app.add_subcommand("estimate", "Output histogram and stability estimates");
  auto* boost_cmd = app.add_subcommand("boost", "Run the list learner built from a stable learner");
  for (auto* sub : {estimate, boost_cmd}) {
    sub->add_option("--learner", config.learner_spec, "Learner spec (inner learner for boost)")->required();
    sub->add_option("--class", config.class_spec, "Concept class spec");
    sub->add_option("--dist", config.dist_spec, "Distribution file or random(count, seed)")->required();
    sub->add_option("--n", config.n, "Sample size (default: the learner's own)");
    sub->add_option("--trials", config.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--eps", config.eps, "Accuracy parameter");
    sub->add_option("--delta", config.delta, "Confidence parameter");
    common(sub, true);
  }
  boost_cmd->add_option("--rho", config.rho, "Stability parameter of the inner learner")->required();
  boost_cmd->add_option("--n0", config.n0, "Inner sample size per batch");

  auto* adversary = app.add_subcommand("adversary", "Search for a distribution certifying instability");
  adversary->add_option("--class", config.class_spec, "Concept class spec")->required();
  adversary->add_option("--learner", config.learner_spec, "Learner spec")->required();
  adversary->add_option("--witness", config.witness_path, "Witness JSON (default: built-in construction)");
  adversary->add_option("--n", config.n, "Sample size per trial (default 100)");
  adversary->add_option("--trials", config.trials, "Trials per g evaluation (default 5000)");
  adversary->add_option("--tol", config.tol, "Residual tolerance");
  adversary->add_option("--damping", config.damping, "Damping coefficient");
  adversary->add_option("--max-sweeps", config.max_sweeps, "Coordinate sweeps");
  common(adversary, true);

  auto* oracle = app.add_subcommand("oracle", "Exact output distribution by enumeration");
  oracle->add_option("--learner", config.learner_spec, "Learner spec")->required();
  oracle->add_option("--class", config.class_spec, "Concept class spec");
  oracle->add_option("--dist", config.dist_spec, "Distribution file or random(count, seed)")->required();
  oracle->add_option("--n", config.n, "Sample size")->required();
  common(oracle, false);

  auto* experiment = app.add_subcommand("experiment", "Run a JSON experiment config");
  experiment->add_option("config", config_path, "Config file")->required();
  common(experiment, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const bool seed_given = chosen->count("--seed") > 0;
    if (chosen == experiment) {
      ExperimentConfig file = config_from_json(read_json_file(config_path));
      if (seed_given) file.seed = seed;
      if (chosen->count("--threads") > 0) file.threads = config.threads;
      if (chosen->count("--out") > 0) file.out = config.out;
      config = std::move(file);
    } else {
      config.command = chosen->get_name();
      if (seed_given) config.seed = seed;
      if (chosen == adversary && chosen->count("--trials") == 0) config.trials = SolverOptions{}.trials;
    }
    const Report report = run_experiment(config);
    if (config.out.empty()) {
      out << report.csv;
    } else {
      write_file_atomic(config.out + ".csv", report.csv);
      write_file_atomic(config.out + ".json", report.json);
    }
    if (report.exit_code == kExitUnconverged) err << "adversary: search did not converge\n";
    return report.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace stablab::cli
