#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace icflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A value violated a documented precondition (grid size, winding, order...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A periodic primitive was requested for an integrand with nonzero mean.
class MeanNotZero : public Error {
public:
  MeanNotZero(double mean_integral, double tolerance);
  double integral() const { return integral_; }

private:
  double integral_;
};

/// The curvature left the admissible range (non-finite or above the cap).
class Blowup : public Error {
public:
  using Error::Error;
};

/// A step produced a state that failed re-validation.
class StepRejected : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  enum class Kind { EmptyWindow, NonPositiveEnergy };
  FitError(Kind kind, const std::string &what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Interpolation exponent outside the p < 2 regime.
class RegimeViolation : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// One problem found while validating a run configuration.
struct ConfigIssue {
  enum class Kind { UnknownKey, OutOfRange, MissingRequired, TypeMismatch };
  Kind kind;
  std::string key;
  std::string detail;

  bool operator==(const ConfigIssue &) const = default;
};

std::string to_string(ConfigIssue::Kind kind);

/// Configuration rejected; carries every issue found, not only the first.
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue> &issues() const { return issues_; }

private:
  std::vector<ConfigIssue> issues_;
};

} // namespace icflow
