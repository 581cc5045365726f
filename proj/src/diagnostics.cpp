#include "icflow/diagnostics.hpp"

#include "icflow/errors.hpp"
#include "icflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace icflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MonitorResult upper_bound_monitor(std::string name, double value, double limit,
                                  bool hard, bool active = true) {
  return MonitorResult{std::move(name), value, limit, active, hard,
                       !active || value <= limit};
}

} // namespace

DecayWindow default_decay_window(const RunRecord &record) {
  if (record.rows.empty()) {
    return {};
  }
  const double t0 = record.rows.front().t;
  const double t1 = record.rows.back().t;
  return {t0 + 0.25 * (t1 - t0), t0 + 0.75 * (t1 - t0)};
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> energy,
                   DecayWindow window) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.t_lo || t[i] > window.t_hi) {
      continue;
    }
    if (!(energy[i] > 0.0)) {
      throw FitError(FitError::Kind::NonPositiveEnergy,
                     "energy is not positive inside the fit window");
    }
    xs.push_back(t[i]);
    ys.push_back(std::log(energy[i]));
  }
  if (xs.size() < 2 || !(window.t_hi > window.t_lo)) {
    throw FitError(FitError::Kind::EmptyWindow,
                   "fewer than two samples inside the fit window");
  }
  const double count = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw FitError(FitError::Kind::EmptyWindow, "fit window has a single time");
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  const double r_squared =
      syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return DecayFit{-slope, intercept, r_squared, window, xs.size()};
}

DecayFit fit_decay(const RunRecord &record, std::optional<DecayWindow> window) {
  std::vector<double> t;
  std::vector<double> energy;
  t.reserve(record.rows.size());
  energy.reserve(record.rows.size());
  for (const RunRow &row : record.rows) {
    t.push_back(row.t);
    energy.push_back(row.energy);
  }
  return fit_decay(t, energy, window.value_or(default_decay_window(record)));
}

double predicted_dedt(const RunRow &row) {
  return -row.g_l2sq - row.h * row.g_integral;
}

double dedt_identity_residual(const RunRecord &record, std::size_t i) {
  const auto &rows = record.rows;
  if (i == 0 || i + 1 >= rows.size()) {
    throw InvalidArgument("centered difference needs an interior row");
  }
  const double measured = (rows[i + 1].energy - rows[i - 1].energy) /
                          (rows[i + 1].t - rows[i - 1].t);
  const double scale = std::max(std::abs(rows[i].g_l2sq), kResidualFloor);
  return std::abs(measured - predicted_dedt(rows[i])) / scale;
}

double max_dedt_identity_residual(const RunRecord &record) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < record.rows.size(); ++i) {
    worst = std::max(worst, dedt_identity_residual(record, i));
  }
  return worst;
}

double h_identity_residual(const CurvatureProfile &p) {
  return std::abs(constraint_h(p) - constraint_h_from_speed(p));
}

double sobolev_rate_residual(const CurvatureProfile &p, int l, double dt) {
  if (l < 0 || !(dt > 0.0)) {
    throw InvalidArgument("sobolev_rate_residual needs l >= 0 and dt > 0");
  }
  auto level = [l](const GridFunction &k) { return l == 0 ? k : deriv(k, l); };
  auto seminorm = [&](const CurvatureProfile &q) {
    const GridFunction d = level(q.k());
    return integrate(d * d);
  };
  const double analytic = 2.0 * integrate(level(p.k()) * level(rhs(p)));

  IntegratorConfig cfg;
  cfg.scheme = Scheme::explicit_rk4;
  cfg.dealias = false;
  cfg.stop.blowup_cap = 1e300;
  const double q0 = seminorm(p);
  auto difference = [&](double tau) {
    cfg.dt = tau;
    FlowState next = step(initial_state(p), cfg);
    return (seminorm(next.profile) - q0) / tau;
  };
  const double numeric = (4.0 * difference(0.5 * dt) - difference(dt)) / 3.0;
  return std::abs(numeric - analytic) / std::max(std::abs(analytic), kResidualFloor);
}

bool InvariantReport::hard_passed() const {
  return std::all_of(monitors.begin(), monitors.end(),
                     [](const MonitorResult &m) { return !m.hard || m.passed; });
}

std::vector<std::string> InvariantReport::failures(bool include_soft) const {
  std::vector<std::string> names;
  for (const MonitorResult &m : monitors) {
    if (!m.passed && (m.hard || include_soft)) {
      names.push_back(m.name);
    }
  }
  return names;
}

InvariantReport invariant_report(const RunRecord &record,
                                 const MonitorTolerances &tol) {
  if (record.rows.empty()) {
    throw InvalidArgument("invariant report needs a nonempty record");
  }
  const double length = record.length;
  const int omega = record.omega;
  const double turning = kTwoPi * omega;
  const double e0 = record.rows.front().energy;

  InvariantReport report;
  report.small_energy = e0 <= tol.smallness_energy;

  double max_increase = -INFINITY;
  double max_dissipation = -INFINITY;
  double ksup_excess = -INFINITY;
  double psw_excess = -INFINITY;
  double kbound_excess = -INFINITY;
  // Bound with the initial energy as printed for small-energy runs.
  const double kbound = 2.0 * std::sqrt(length) * e0 + std::abs(turning) / length;

  for (std::size_t i = 0; i < record.rows.size(); ++i) {
    const RunRow &row = record.rows[i];
    report.max_winding_drift =
        std::max(report.max_winding_drift, std::abs(row.winding_integral - turning));
    report.max_constraint_integral =
        std::max(report.max_constraint_integral, std::abs(row.constraint_integral));
    report.max_k_sup = std::max(report.max_k_sup, row.k_sup);
    report.max_kss_l2sq = std::max(report.max_kss_l2sq, row.kss_l2sq);
    report.max_abs_h = std::max(report.max_abs_h, std::abs(row.h));
    report.max_h_identity_residual = std::max(report.max_h_identity_residual,
                                              std::abs(row.h - row.h_alternative));
    report.max_closure_defect = std::max(report.max_closure_defect, row.closure_defect);

    if (i > 0) {
      max_increase = std::max(max_increase, row.energy - record.rows[i - 1].energy);
    }
    max_dissipation = std::max(max_dissipation, predicted_dedt(row));
    ksup_excess = std::max(ksup_excess,
                           length * row.k_sup -
                               (std::sqrt(length * length * length * 2.0 * row.energy) +
                                std::abs(turning)));
    psw_excess = std::max(psw_excess, row.sup_deviation * row.sup_deviation -
                                          length / kTwoPi * 2.0 * row.energy);
    kbound_excess = std::max(kbound_excess, row.k_sup - kbound);
  }
  const RunRow &last = record.rows.back();
  report.final_sup_deviation = last.sup_deviation;
  report.final_closure_defect = last.closure_defect;
  report.final_abs_h = std::abs(last.h);
  if (record.rows.size() < 2) {
    max_increase = 0.0;
  }

  const bool finished = record.status != RunStatus::Blowup &&
                        record.status != RunStatus::Rejected;
  auto &m = report.monitors;
  m.push_back(MonitorResult{"terminal_status", finished ? 0.0 : 1.0, 0.0, true,
                            true, finished});
  m.push_back(upper_bound_monitor("winding_drift", report.max_winding_drift,
                                  tol.winding, true));
  m.push_back(upper_bound_monitor("constraint_integral",
                                  report.max_constraint_integral, tol.constraint,
                                  true));
  m.push_back(upper_bound_monitor("energy_monotone", max_increase,
                                  tol.monotone_slack, true, report.small_energy));
  m.push_back(upper_bound_monitor("dissipation_sign", max_dissipation,
                                  tol.monotone_slack, true, report.small_energy));
  m.push_back(upper_bound_monitor("ksup_energy_bound", ksup_excess,
                                  tol.bound_slack, true));
  m.push_back(upper_bound_monitor("pointwise_decay_bound", psw_excess,
                                  tol.bound_slack, true));
  m.push_back(upper_bound_monitor("closure_defect", report.max_closure_defect,
                                  tol.closure, false));
  m.push_back(upper_bound_monitor("h_identity", report.max_h_identity_residual,
                                  tol.h_identity, false));
  m.push_back(upper_bound_monitor("kbound_initial_energy", kbound_excess,
                                  tol.bound_slack, false, report.small_energy));
  return report;
}

} // namespace icflow
