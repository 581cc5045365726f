#pragma once

// Post-processing of run records: decay fits, identity residuals and the
// invariant monitors that decide whether a run passed.

#include "icflow/curve_model.hpp"
#include "icflow/run_record.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace icflow {

struct DecayWindow {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Least-squares line through (t, log E); rate = -slope.
struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  DecayWindow window;
  std::size_t points = 0;
};

/// Middle half of the recorded time span.
DecayWindow default_decay_window(const RunRecord &record);

/// Throws FitError (EmptyWindow if fewer than two samples fall inside the
/// window, NonPositiveEnergy if any of them has E <= 0).
DecayFit fit_decay(std::span<const double> t, std::span<const double> energy,
                   DecayWindow window);
DecayFit fit_decay(const RunRecord &record,
                   std::optional<DecayWindow> window = std::nullopt);

/// -int G^2 - h int G: the energy dissipation predicted at a row.
double predicted_dedt(const RunRow &row);

/// Floor on the denominator of relative residuals.
inline constexpr double kResidualFloor = 1e-14;

/// |centered difference of E at row i - predicted_dedt| / max(int G^2, floor).
/// Needs 0 < i < rows - 1. Uses only stored energies, not the engine.
double dedt_identity_residual(const RunRecord &record, std::size_t i);

/// Largest residual over interior rows (0 if there are none).
double max_dedt_identity_residual(const RunRecord &record);

/// |h from the k_ss formula - h from -int(k G) / (2 pi omega)|.
double h_identity_residual(const CurvatureProfile &p);

/// d/dt int k_{s^l}^2 two ways: 2 int k_{s^l} (k_t)_{s^l} from rhs(), and a
/// Richardson-extrapolated forward difference over explicit RK4 steps of
/// size dt and dt/2. Returns |difference| / max(|analytic|, floor).
double sobolev_rate_residual(const CurvatureProfile &p, int l, double dt);

struct MonitorTolerances {
  double winding = 1e-8;
  double constraint = 1e-10;
  double monotone_slack = 1e-12;
  double bound_slack = 1e-10;
  double closure = 1e-6;
  double h_identity = 1e-10;
  /// Monotonicity checks apply only when the initial energy is at most this.
  double smallness_energy = 1e-2;

  bool operator==(const MonitorTolerances &) const = default;
};

struct MonitorResult {
  std::string name;
  double value = 0.0; ///< worst observed value of the monitored quantity
  double limit = 0.0;
  bool active = true; ///< inactive monitors always pass
  bool hard = true;   ///< hard monitors decide the run's pass/fail
  bool passed = true;
};

struct InvariantReport {
  double max_winding_drift = 0.0;
  double max_constraint_integral = 0.0;
  double max_k_sup = 0.0;
  double max_kss_l2sq = 0.0;
  double max_abs_h = 0.0;
  double max_h_identity_residual = 0.0;
  double max_closure_defect = 0.0;
  double final_sup_deviation = 0.0;
  double final_closure_defect = 0.0;
  double final_abs_h = 0.0;
  bool small_energy = false;
  std::vector<MonitorResult> monitors;

  bool hard_passed() const;
  /// Names of failed monitors (hard ones only unless include_soft).
  std::vector<std::string> failures(bool include_soft = false) const;
};

InvariantReport invariant_report(const RunRecord &record,
                                 const MonitorTolerances &tol = {});

} // namespace icflow
