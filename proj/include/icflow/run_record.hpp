#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace icflow {

enum class Scheme { imex_euler, imex_bdf2, explicit_rk4 };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

struct StopCriteria {
  double t_max = 1.0;
  /// Stop once E <= energy_tol. Ignored when the initial energy already is.
  double energy_tol = 0.0;
  /// Blowup once ||k||_inf exceeds this.
  double blowup_cap = 1e3;

  bool operator==(const StopCriteria &) const = default;
};

struct IntegratorConfig {
  Scheme scheme = Scheme::imex_bdf2;
  double dt = 1e-4;
  bool dealias = true;
  StopCriteria stop;

  /// Throws InvalidArgument unless dt > 0, t_max >= 0, blowup_cap > 0.
  void validate() const;

  bool operator==(const IntegratorConfig &) const = default;
};

/// Default blowup cap: 10^3 times the target curvature.
double default_blowup_cap(double length, int omega);

enum class RunStatus {
  Converged,  ///< energy fell to energy_tol
  Stationary, ///< started (and stayed) at energy_tol or below; ran to t_max
  TimeLimit,  ///< reached t_max
  Blowup,     ///< curvature non-finite or above the cap
  Rejected    ///< a step failed validation or the constraint solvability check
};

std::string to_string(RunStatus status);

/// One row per accepted state (including the initial one).
struct RunRow {
  double t = 0.0;
  double energy = 0.0;
  double h = 0.0;
  double winding_integral = 0.0;    ///< integral of k
  double constraint_integral = 0.0; ///< integral of k (G + h)
  double k_sup = 0.0;
  double sup_deviation = 0.0;
  double kss_l2sq = 0.0; ///< integral of k_ss^2
  double closure_defect = 0.0;
  double g_l2sq = 0.0;        ///< integral of G^2
  double g_integral = 0.0;    ///< integral of G
  double h_alternative = 0.0; ///< -integral(k G) / (2 pi omega)
};

struct RunRecord {
  std::vector<RunRow> rows;
  RunStatus status = RunStatus::TimeLimit;
  std::string message;

  IntegratorConfig integrator;
  double length = 0.0;
  int omega = 0;
  std::size_t grid_size = 0;
  /// Samples of the last accepted curvature.
  std::vector<double> final_curvature;

  double initial_energy() const { return rows.empty() ? 0.0 : rows.front().energy; }
};

} // namespace icflow
