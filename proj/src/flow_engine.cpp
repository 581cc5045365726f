#include "icflow/flow_engine.hpp"

#include "icflow/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace icflow {

namespace {

using spectral::Spectrum;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> derivative_of(const Spectrum &coeffs, int order,
                                  std::size_t n, double length) {
  Spectrum c = coeffs;
  spectral::differentiate(c, order, n, length);
  return spectral::inverse(c, n);
}

double grid_integral(std::span<const double> values, double length) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum * length / static_cast<double>(values.size());
}

void require_finite(std::span<const double> values, const char *what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Blowup(std::string("non-finite values in ") + what);
    }
  }
}

// Shared front half: derivatives of k and the speed G split into its linear
// part k_ssss + kbar^2 k_ss and the nonlinear rest.
struct SpeedParts {
  Spectrum k_hat;
  std::vector<double> k1, k2;
  std::vector<double> nonlinear; // (k^2 - kbar^2) k_ss - k k_s^2 / 2
  Spectrum nonlinear_hat;
  std::vector<double> G;
};

SpeedParts assemble_speed(const CurvatureProfile &p, bool dealias) {
  const std::size_t n = p.size();
  const double length = p.length();
  const double kbar = p.target_curvature();
  const auto k = p.k().samples();

  SpeedParts parts;
  parts.k_hat = spectral::forward(k);
  parts.k1 = derivative_of(parts.k_hat, 1, n, length);
  parts.k2 = derivative_of(parts.k_hat, 2, n, length);
  const auto k4 = derivative_of(parts.k_hat, 4, n, length);

  parts.nonlinear.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    parts.nonlinear[j] = (k[j] - kbar) * (k[j] + kbar) * parts.k2[j] -
                         0.5 * k[j] * parts.k1[j] * parts.k1[j];
  }
  parts.nonlinear_hat = spectral::forward(parts.nonlinear);
  if (dealias) {
    spectral::truncate_two_thirds(parts.nonlinear_hat, n);
    parts.nonlinear = spectral::inverse(parts.nonlinear_hat, n);
  }

  parts.G.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    parts.G[j] = k4[j] + kbar * kbar * parts.k2[j] + parts.nonlinear[j];
  }
  require_finite(parts.G, "speed G");
  return parts;
}

double h_formula(const CurvatureProfile &p, std::span<const double> k1,
                 std::span<const double> k2) {
  const auto k = p.k().samples();
  double kss_sq = 0.0;
  double k2ks2 = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    kss_sq += k2[j] * k2[j];
    k2ks2 += k[j] * k[j] * k1[j] * k1[j];
  }
  const double ds = p.k().spacing();
  return (-kss_sq * ds + 3.5 * k2ks2 * ds) / (kTwoPi * p.omega());
}

CurvatureProfile checked_profile(const CurvatureProfile &like,
                                 std::vector<double> samples,
                                 double blowup_cap) {
  double sup = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw Blowup("curvature became non-finite");
    }
    sup = std::max(sup, std::abs(v));
  }
  if (sup > blowup_cap) {
    throw Blowup("||k||_inf = " + std::to_string(sup) + " exceeds cap " +
                 std::to_string(blowup_cap));
  }
  try {
    return like.with_curvature(GridFunction(std::move(samples), like.length()));
  } catch (const InvalidArgument &e) {
    throw StepRejected(std::string("step produced an invalid profile: ") + e.what());
  }
}

std::vector<double> implicit_symbols(std::size_t n, double length, double kbar) {
  std::vector<double> symbols(n / 2 + 1);
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    symbols[j] = implicit_symbol(j, length, kbar);
  }
  return symbols;
}

// Lambda k + remainder in Fourier space.
Spectrum full_rhs_hat(const FlowTerms &terms, std::span<const double> symbols) {
  Spectrum out(terms.k_hat.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = symbols[j] * terms.k_hat[j] + terms.remainder_hat[j];
  }
  return out;
}

FlowState rk4_step(const FlowState &state, const FlowTerms &terms,
                   const IntegratorConfig &cfg) {
  const CurvatureProfile &p = state.profile;
  const std::size_t n = p.size();
  const double dt = cfg.dt;
  const auto symbols = implicit_symbols(n, p.length(), p.target_curvature());

  auto stage_profile = [&](const Spectrum &base, const Spectrum &slope,
                           double weight) {
    Spectrum c(base.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      c[j] = base[j] + weight * dt * slope[j];
    }
    return checked_profile(p, spectral::inverse(c, n), cfg.stop.blowup_cap);
  };

  const Spectrum &k0 = terms.k_hat;
  const Spectrum s1 = full_rhs_hat(terms, symbols);
  const Spectrum s2 =
      full_rhs_hat(evaluate_flow(stage_profile(k0, s1, 0.5), cfg.dealias), symbols);
  const Spectrum s3 =
      full_rhs_hat(evaluate_flow(stage_profile(k0, s2, 0.5), cfg.dealias), symbols);
  const Spectrum s4 =
      full_rhs_hat(evaluate_flow(stage_profile(k0, s3, 1.0), cfg.dealias), symbols);

  Spectrum next(k0.size());
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] = k0[j] + dt / 6.0 * (s1[j] + 2.0 * s2[j] + 2.0 * s3[j] + s4[j]);
  }
  CurvatureProfile profile =
      checked_profile(p, spectral::inverse(next, n), cfg.stop.blowup_cap);
  const double h = constraint_h(profile);
  return FlowState{std::move(profile), state.t + dt, h, state.step_index + 1,
                   std::nullopt};
}

FlowState imex_step(const FlowState &state, const FlowTerms &terms,
                    const IntegratorConfig &cfg) {
  const CurvatureProfile &p = state.profile;
  const std::size_t n = p.size();
  const double dt = cfg.dt;
  const auto symbols = implicit_symbols(n, p.length(), p.target_curvature());
  const Spectrum &k_hat = terms.k_hat;
  const Spectrum &rem = terms.remainder_hat;

  const bool two_step = cfg.scheme == Scheme::imex_bdf2 && state.history &&
                        state.history->dt == dt;
  Spectrum next(k_hat.size());
  if (two_step) {
    // SBDF2: (3k' - 4k + k_prev) / (2dt) = Lambda k' + 2N - N_prev
    const Spectrum &k_prev = state.history->k_hat;
    const Spectrum &rem_prev = state.history->remainder_hat;
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] = (4.0 * k_hat[j] - k_prev[j] + 2.0 * dt * (2.0 * rem[j] - rem_prev[j])) /
                (3.0 - 2.0 * dt * symbols[j]);
    }
  } else {
    // IMEX Euler; also the start-up step of SBDF2.
    for (std::size_t j = 0; j < next.size(); ++j) {
      next[j] = (k_hat[j] + dt * rem[j]) / (1.0 - dt * symbols[j]);
    }
  }
  CurvatureProfile profile =
      checked_profile(p, spectral::inverse(next, n), cfg.stop.blowup_cap);
  const double h = constraint_h(profile);
  std::optional<StepHistory> history;
  if (cfg.scheme == Scheme::imex_bdf2) {
    history = StepHistory{k_hat, rem, dt};
  }
  return FlowState{std::move(profile), state.t + dt, h, state.step_index + 1,
                   std::move(history)};
}

RunRow make_row(const FlowState &state, const FlowTerms &terms) {
  const CurvatureProfile &p = state.profile;
  RunRow row;
  row.t = state.t;
  row.energy = terms.energy;
  row.h = terms.h;
  row.winding_integral = integrate(p.k());
  row.constraint_integral = terms.constraint_integral;
  row.k_sup = p.k().max_abs();
  row.sup_deviation = sup_deviation(p);
  row.kss_l2sq = terms.kss_l2sq;
  row.closure_defect = closure_defect(p);
  row.g_l2sq = terms.g_l2sq;
  row.g_integral = terms.g_integral;
  row.h_alternative = terms.h_alternative;
  return row;
}

} // namespace

double implicit_symbol(std::size_t index, double length, double kbar) {
  const double q2 = std::pow(spectral::wavenumber(index, length), 2);
  const double gap = q2 - kbar * kbar;
  return -q2 * gap * gap;
}

FlowTerms evaluate_flow(const CurvatureProfile &p, bool dealias) {
  const std::size_t n = p.size();
  const double length = p.length();
  const double kbar = p.target_curvature();
  const auto k = p.k().samples();
  SpeedParts parts = assemble_speed(p, dealias);

  FlowTerms terms{.G = GridFunction(parts.G, length),
                  .h = h_formula(p, parts.k1, parts.k2),
                  .F = GridFunction(parts.G, length),
                  .T = GridFunction::constant(n, length, 0.0),
                  .k_hat = std::move(parts.k_hat),
                  .remainder_hat = {}};
  terms.F = terms.G + terms.h;

  std::vector<double> kF(n);
  std::vector<double> kG(n);
  std::vector<double> G2(n);
  for (std::size_t j = 0; j < n; ++j) {
    kF[j] = k[j] * terms.F[j];
    kG[j] = k[j] * parts.G[j];
    G2[j] = parts.G[j] * parts.G[j];
  }
  const GridFunction kF_grid(kF, length);
  terms.constraint_integral = integrate(kF_grid);
  terms.T = antideriv(kF_grid);

  const auto nonlinear_ss = derivative_of(parts.nonlinear_hat, 2, n, length);
  std::vector<double> remainder(n);
  for (std::size_t j = 0; j < n; ++j) {
    remainder[j] = nonlinear_ss[j] + kbar * kbar * (parts.nonlinear[j] + terms.h) +
                   (k[j] - kbar) * (k[j] + kbar) * terms.F[j] +
                   terms.T[j] * parts.k1[j];
  }
  require_finite(remainder, "right-hand side");
  terms.remainder_hat = spectral::forward(remainder);
  if (dealias) {
    spectral::truncate_two_thirds(terms.remainder_hat, n);
  }

  std::vector<double> k1sq(n);
  std::vector<double> k2sq(n);
  for (std::size_t j = 0; j < n; ++j) {
    k1sq[j] = parts.k1[j] * parts.k1[j];
    k2sq[j] = parts.k2[j] * parts.k2[j];
  }
  terms.energy = 0.5 * grid_integral(k1sq, length);
  terms.kss_l2sq = grid_integral(k2sq, length);
  terms.g_l2sq = grid_integral(G2, length);
  terms.g_integral = grid_integral(parts.G, length);
  terms.h_alternative = -grid_integral(kG, length) / (kTwoPi * p.omega());
  return terms;
}

GridFunction speed_G(const CurvatureProfile &p, bool dealias) {
  return GridFunction(assemble_speed(p, dealias).G, p.length());
}

double constraint_h(const CurvatureProfile &p) {
  const auto k_hat = spectral::forward(p.k().samples());
  const auto k1 = derivative_of(k_hat, 1, p.size(), p.length());
  const auto k2 = derivative_of(k_hat, 2, p.size(), p.length());
  return h_formula(p, k1, k2);
}

double constraint_h_from_speed(const CurvatureProfile &p) {
  return -integrate(p.k() * speed_G(p)) / (kTwoPi * p.omega());
}

GridFunction tangential_T(const CurvatureProfile &p, const GridFunction &F) {
  return antideriv(p.k() * F);
}

GridFunction rhs(const CurvatureProfile &p, bool dealias) {
  const FlowTerms terms = evaluate_flow(p, dealias);
  const auto symbols = implicit_symbols(p.size(), p.length(), p.target_curvature());
  return GridFunction(spectral::inverse(full_rhs_hat(terms, symbols), p.size()),
                      p.length());
}

FlowState initial_state(CurvatureProfile profile) {
  const double h = constraint_h(profile);
  return FlowState{std::move(profile), 0.0, h, 0, std::nullopt};
}

FlowState step(const FlowState &state, const IntegratorConfig &cfg) {
  cfg.validate();
  return step(state, evaluate_flow(state.profile, cfg.dealias), cfg);
}

FlowState step(const FlowState &state, const FlowTerms &terms,
               const IntegratorConfig &cfg) {
  if (cfg.scheme == Scheme::explicit_rk4) {
    return rk4_step(state, terms, cfg);
  }
  return imex_step(state, terms, cfg);
}

RunRecord run(const CurvatureProfile &initial, const IntegratorConfig &cfg) {
  cfg.validate();
  RunRecord record;
  record.integrator = cfg;
  record.length = initial.length();
  record.omega = initial.omega();
  record.grid_size = initial.size();

  // t is tracked as step_index * dt; the loop ends after ceil(t_max / dt) steps.
  const auto max_steps =
      static_cast<std::size_t>(std::ceil(cfg.stop.t_max / cfg.dt - 1e-9));
  FlowState state = initial_state(initial);
  bool stationary = false;
  bool stayed_small = true;

  while (true) {
    std::optional<FlowTerms> terms;
    try {
      terms.emplace(evaluate_flow(state.profile, cfg.dealias));
    } catch (const MeanNotZero &e) {
      record.status = RunStatus::Rejected;
      record.message = std::string("constraint solvability failed: ") + e.what();
      break;
    } catch (const Blowup &e) {
      record.status = RunStatus::Blowup;
      record.message = e.what();
      break;
    }
    RunRow row = make_row(state, *terms);
    row.t = static_cast<double>(state.step_index) * cfg.dt;
    record.rows.push_back(row);

    if (state.step_index == 0) {
      stationary = row.energy <= cfg.stop.energy_tol;
    }
    stayed_small = stayed_small && row.energy <= cfg.stop.energy_tol;
    if (!stationary && row.energy <= cfg.stop.energy_tol) {
      record.status = RunStatus::Converged;
      record.message = "energy reached tolerance";
      break;
    }
    if (state.step_index >= max_steps) {
      record.status = stationary && stayed_small ? RunStatus::Stationary
                                                 : RunStatus::TimeLimit;
      record.message = "reached t_max";
      break;
    }
    try {
      state = step(state, *terms, cfg);
    } catch (const Blowup &e) {
      record.status = RunStatus::Blowup;
      record.message = e.what();
      break;
    } catch (const StepRejected &e) {
      record.status = RunStatus::Rejected;
      record.message = e.what();
      break;
    } catch (const MeanNotZero &e) {
      record.status = RunStatus::Rejected;
      record.message = std::string("constraint solvability failed: ") + e.what();
      break;
    }
  }
  const auto &last = state.profile.k().samples();
  record.final_curvature.assign(last.begin(), last.end());
  return record;
}

} // namespace icflow
