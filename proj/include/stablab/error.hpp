#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stablab {

/// Base class for every error raised by the library. Carries the module that
/// raised it so command-line reports can name the failing component.
class Error : public std::exception {
 public:
  Error(std::string module, std::string message)
      : module_(std::move(module)), message_(std::move(message)) {
    rebuild();
  }

  const char* what() const noexcept override { return what_.c_str(); }
  const std::string& module() const noexcept { return module_; }
  const std::string& message() const noexcept { return message_; }

  /// Prefixes additional context (e.g. a trial index) to the message while
  /// keeping the dynamic type, so `throw;` after this call rethrows it intact.
  void add_context(const std::string& context) {
    message_ = context + ": " + message_;
    rebuild();
  }

 private:
  void rebuild() { what_ = module_ + ": " + message_; }

  std::string module_;
  std::string message_;
  std::string what_;
};

/// Invalid parameter value or violated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A brute-force or enumeration budget was exceeded.
class SizeError : public Error {
 public:
  SizeError(std::string module, std::string message, std::size_t lower_bound = 0)
      : Error(std::move(module), std::move(message)), lower_bound_(lower_bound) {}

  /// Best lower bound established before the cap was hit (0 if none).
  std::size_t lower_bound() const noexcept { return lower_bound_; }

 private:
  std::size_t lower_bound_;
};

/// A point, hypothesis or atom does not belong to the expected domain.
class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

/// A sample carries the same point with both labels where a learner requires
/// consistent labels.
class RealizabilityError : public Error {
 public:
  using Error::Error;
};

/// An empiricalized learner could not find a hypothesis under its loss budget.
class EmpiricalViolationError : public Error {
 public:
  using Error::Error;
};

/// A structural object (witness, class file, distribution file) failed checks.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The learner under test does not satisfy the boundary sign conditions the
/// root search needs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace stablab
