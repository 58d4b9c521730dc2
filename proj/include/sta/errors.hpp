#pragma once

#include <stdexcept>
#include <string>

namespace sta {

/// Base class for every error raised by the library. The exit code is the
/// stable contract used by the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed or inconsistent configuration (missing field, bad value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Requested configuration is well formed but not supported by the method.
class UnsupportedError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Evaluation point outside the domain of a protocol or function.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double where)
      : Error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// The physics is outside its range of validity (e.g. negative Omega^2).
class ValidityError : public Error {
 public:
  ValidityError(const std::string& what, double where)
      : Error(what), where_(where) {}
  double where() const noexcept { return where_; }
  int exit_code() const noexcept override { return 2; }

 private:
  double where_;
};

/// The ODE integrator could not make progress.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_t)
      : Error(what), last_good_t_(last_good_t) {}
  double last_good_t() const noexcept { return last_good_t_; }
  int exit_code() const noexcept override { return 3; }

 private:
  double last_good_t_;
};

/// A requested accuracy could not be reached within the work budget.
/// Carries the best available value and its error bound.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_value, double bound)
      : Error(what), best_value_(best_value), bound_(bound) {}
  double best_value() const noexcept { return best_value_; }
  double bound() const noexcept { return bound_; }
  int exit_code() const noexcept override { return 3; }

 private:
  double best_value_;
  double bound_;
};

}  // namespace sta
