#include "icflow/run_record.hpp"

#include "icflow/errors.hpp"

#include <cmath>
#include <numbers>

namespace icflow {

std::string to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::imex_euler:
    return "imex_euler";
  case Scheme::imex_bdf2:
    return "imex_bdf2";
  case Scheme::explicit_rk4:
    return "explicit_rk4";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string &name) {
  if (name == "imex_euler") {
    return Scheme::imex_euler;
  }
  if (name == "imex_bdf2") {
    return Scheme::imex_bdf2;
  }
  if (name == "explicit_rk4") {
    return Scheme::explicit_rk4;
  }
  throw InvalidArgument("unknown scheme '" + name + "'");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("dt must be positive and finite");
  }
  if (!(stop.t_max >= 0.0) || !std::isfinite(stop.t_max)) {
    throw InvalidArgument("t_max must be nonnegative and finite");
  }
  if (!(stop.energy_tol >= 0.0)) {
    throw InvalidArgument("energy_tol must be nonnegative");
  }
  if (!(stop.blowup_cap > 0.0)) {
    throw InvalidArgument("blowup_cap must be positive");
  }
}

double default_blowup_cap(double length, int omega) {
  return 1e3 * std::abs(2.0 * std::numbers::pi * omega / length);
}

std::string to_string(RunStatus status) {
  switch (status) {
  case RunStatus::Converged:
    return "Converged";
  case RunStatus::Stationary:
    return "Stationary";
  case RunStatus::TimeLimit:
    return "TimeLimit";
  case RunStatus::Blowup:
    return "Blowup";
  case RunStatus::Rejected:
    return "Rejected";
  }
  return "Unknown";
}

} // namespace icflow
