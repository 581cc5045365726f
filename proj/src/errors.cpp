#include "icflow/errors.hpp"

#include <sstream>

namespace icflow {

namespace {

std::string describe_mean(double integral, double tolerance) {
  std::ostringstream os;
  os.precision(6);
  os << "integrand has nonzero mean: integral " << integral
     << " exceeds tolerance " << tolerance;
  return os.str();
}

std::string describe_issues(const std::vector<ConfigIssue> &issues) {
  std::ostringstream os;
  os << "invalid configuration (" << issues.size() << " issue"
     << (issues.size() == 1 ? "" : "s") << ")";
  for (const auto &issue : issues) {
    os << "\n  " << to_string(issue.kind) << "(\"" << issue.key << "\")";
    if (!issue.detail.empty()) {
      os << ": " << issue.detail;
    }
  }
  return os.str();
}

} // namespace

MeanNotZero::MeanNotZero(double mean_integral, double tolerance)
    : Error(describe_mean(mean_integral, tolerance)), integral_(mean_integral) {}

std::string to_string(ConfigIssue::Kind kind) {
  switch (kind) {
  case ConfigIssue::Kind::UnknownKey:
    return "UnknownKey";
  case ConfigIssue::Kind::OutOfRange:
    return "OutOfRange";
  case ConfigIssue::Kind::MissingRequired:
    return "MissingRequired";
  case ConfigIssue::Kind::TypeMismatch:
    return "TypeMismatch";
  }
  return "Unknown";
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(describe_issues(issues)), issues_(std::move(issues)) {}

} // namespace icflow
