#pragma once

// Length-constrained sixth-order flow in curvature form.
//
// The state is k(s) on a fixed arclength grid. With normal speed F = G + h,
//
//   G = k_ssss + k^2 k_ss - k k_s^2 / 2
//   h = ( -int k_ss^2 + 7/2 int k^2 k_s^2 ) / (2 pi omega)
//   T = periodic primitive of k F  (tangential redistribution, T(0) = 0)
//   k_t = F_ss + k^2 F + T k_s
//
// h is exactly the value making int k F = 0, i.e. the length stationary and
// T periodic. IMEX schemes treat
//
//   Lambda = d^6 + 2 kbar^2 d^4 + kbar^4 d^2,   kbar = 2 pi omega / L0,
//
// implicitly (diagonal in Fourier space, symbol -q^2 (q^2 - kbar^2)^2) and the
// remainder explicitly.

#include "icflow/curve_model.hpp"
#include "icflow/grid_ops.hpp"
#include "icflow/run_record.hpp"
#include "icflow/spectral.hpp"

#include <cstddef>
#include <optional>

namespace icflow {

/// Every quantity derived from one curvature profile during a step.
struct FlowTerms {
  GridFunction G;
  double h = 0.0;
  GridFunction F;
  GridFunction T;
  spectral::Spectrum k_hat;
  /// Explicit part of the right-hand side, rhs - Lambda k, in Fourier space.
  spectral::Spectrum remainder_hat;

  double energy = 0.0;
  double kss_l2sq = 0.0;
  double constraint_integral = 0.0;
  double g_l2sq = 0.0;
  double g_integral = 0.0;
  double h_alternative = 0.0;
};

/// Throws MeanNotZero if int k F is not numerically zero (wrong h).
FlowTerms evaluate_flow(const CurvatureProfile &p, bool dealias);

GridFunction speed_G(const CurvatureProfile &p, bool dealias = false);

/// h by the formula in terms of k_ss and k^2 k_s^2.
double constraint_h(const CurvatureProfile &p);

/// The equivalent form -int(k G) / (2 pi omega), kept as a cross-check.
double constraint_h_from_speed(const CurvatureProfile &p);

/// Periodic primitive of k F with T(0) = 0. Throws MeanNotZero.
GridFunction tangential_T(const CurvatureProfile &p, const GridFunction &F);

/// Full semidiscrete right-hand side k_t.
GridFunction rhs(const CurvatureProfile &p, bool dealias = false);

/// Fourier symbol of Lambda at mode index j.
double implicit_symbol(std::size_t index, double length, double kbar);

struct StepHistory {
  spectral::Spectrum k_hat;
  spectral::Spectrum remainder_hat;
  double dt = 0.0;
};

struct FlowState {
  CurvatureProfile profile;
  double t = 0.0;
  double h = 0.0;
  std::size_t step_index = 0;
  /// Previous level for two-step schemes; empty after construction.
  std::optional<StepHistory> history;
};

FlowState initial_state(CurvatureProfile profile);

/// Advance one step. Throws Blowup (non-finite or ||k||_inf > blowup_cap),
/// StepRejected (new state fails validation) or MeanNotZero.
FlowState step(const FlowState &state, const IntegratorConfig &cfg);

/// Step using terms already evaluated at state.profile.
FlowState step(const FlowState &state, const FlowTerms &terms,
               const IntegratorConfig &cfg);

/// Step until t_max, the energy tolerance or a failure. Failures end up in
/// the record's status; they are not thrown.
RunRecord run(const CurvatureProfile &initial, const IntegratorConfig &cfg);

} // namespace icflow
