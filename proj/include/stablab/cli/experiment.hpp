#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stablab/serialization.hpp"

namespace stablab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSize = 3;
inline constexpr int kExitUnconverged = 4;

/// Report schema version, stamped into every CSV header comment and JSON report.
inline constexpr int kReportVersion = 1;

struct ExperimentConfig {
  std::string command;  // dims | estimate | boost | adversary | oracle
  std::string class_spec;
  std::string learner_spec;
  std::string dist_spec;
  std::string witness_path;
  /// Sample size; 0 means the learner's own sample size at (eps, delta).
  std::size_t n = 0;
  std::uint64_t trials = 1000;
  double eps = 0.1;
  double delta = 0.05;
  double rho = 0.0;
  std::size_t n0 = 1;
  double tol = 0.02;
  double damping = 0.02;
  std::size_t max_sweeps = 25;
  std::optional<std::uint64_t> seed;
  /// Never part of a report: outputs are identical for every thread count.
  unsigned threads = 1;
  /// Output prefix; reports go to PREFIX.csv and PREFIX.json.
  std::string out;
};

struct Report {
  std::string csv;
  std::string json;
  int exit_code = kExitOk;
};

/// Runs one pipeline and renders both reports. Errors propagate as exceptions.
Report run_experiment(const ExperimentConfig& config);

/// Experiment files use the long flag names as keys plus "command".
ExperimentConfig config_from_json(const Json& j);

/// Exit code for an error raised while running a command.
int exit_code_for(const std::exception& e) noexcept;

/// Full command-line entry point; writes reports atomically when --out is set,
/// otherwise prints the CSV report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablab::cli
