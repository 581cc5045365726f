#include "icflow/errors.hpp"
#include "icflow/flow_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace icflow;

namespace {

constexpr double kPi = std::numbers::pi;

CurvatureProfile single_mode(double length, int omega, std::size_t n, int m, double eps,
                             double phase = 0.0) {
  const Mode mode{m, eps, phase};
  return make_perturbed_circle(length, omega, n, {&mode, 1});
}

std::vector<Mode> random_modes(std::mt19937_64 &rng, int max_mode, double a_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Mode> modes;
  for (int m = 2; m <= max_mode; ++m) {
    modes.push_back({m, a_max * u(rng), 2 * kPi * u(rng)});
  }
  return modes;
}

// Analytic G for k = 1 + e cos 2s on [0, 2pi).
double speed_cos2(double e, double s) {
  const double c = std::cos(2 * s), sn = std::sin(2 * s);
  const double k = 1 + e * c, k1 = -2 * e * sn, k2 = -4 * e * c, k4 = 16 * e * c;
  return k4 + k * k * k2 - 0.5 * k * k1 * k1;
}

// Periodic primitive with value 0 at s = 0, from a naive O(N^2) DFT.
std::vector<double> naive_primitive(std::span<const double> f, double length) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 1; j < n / 2; ++j) {
    std::complex<double> c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      c += f[i] * std::polar(1.0, -2 * kPi * double(i * j) / double(n));
    }
    c *= 2.0 / double(n);
    const double q = 2 * kPi * double(j) / length;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = length * double(i) / double(n);
      // Re(c e^{iqs}) integrates to Re(c (e^{iqs} - 1) / (iq)).
      out[i] += std::real(c * (std::polar(1.0, q * s) - 1.0) / std::complex<double>(0, q));
    }
  }
  return out;
}

} // namespace

TEST(SpeedG, CircleIsZero) {
  for (int omega : {1, 2, -1}) {
    const auto p = make_circle(2 * kPi, omega, 128);
    EXPECT_LE(speed_G(p).max_abs(), 1e-12);
    EXPECT_LE(speed_G(p, true).max_abs(), 1e-12);
  }
}

TEST(SpeedG, ClosedFormForCos2) {
  // Spectral fourth derivatives carry roundoff ~ 1e-16 * (N/2)^4, so the
  // tolerance follows the grid.
  const double e = 0.1;
  for (auto [n, tol] : {std::pair<std::size_t, double>{64, 1e-10}, {256, 1e-7}}) {
    const auto p = single_mode(2 * kPi, 1, n, 2, e);
    const auto G = speed_G(p);
    EXPECT_NEAR(G[0], 12 * e - 8 * e * e - 4 * e * e * e, tol);
    EXPECT_NEAR(G[0], 1.116, tol);
    for (std::size_t j = 0; j < p.size(); ++j) {
      EXPECT_NEAR(G[j], speed_cos2(e, p.k().node(j)), tol);
    }
    EXPECT_LE((speed_G(p, true) - G).max_abs(), tol);
  }
}

TEST(SpeedG, LinearizationAtCircle) {
  const double eps = 1e-6;
  for (auto [length, omega, m] : {std::tuple{2 * kPi, 1, 2}, std::tuple{2 * kPi, 2, 3},
                                  std::tuple{4 * kPi, 1, 5}}) {
    const auto p = single_mode(length, omega, 128, m, eps, 0.4);
    const double kbar = p.target_curvature();
    const double q = 2 * kPi * m / length;
    const auto G = speed_G(p);
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double u = std::cos(q * p.k().node(j) + 0.4);
      const double linear = eps * (std::pow(q, 4) - kbar * kbar * q * q) * u;
      EXPECT_NEAR(G[j], linear, 1e-4 * std::abs(eps * std::pow(q, 4)));
    }
  }
}

TEST(ConstraintH, CircleIsZero) {
  EXPECT_LE(std::abs(constraint_h(make_circle(2 * kPi, 1, 64))), 1e-13);
  EXPECT_LE(std::abs(constraint_h_from_speed(make_circle(2 * kPi, 3, 64))), 1e-13);
}

TEST(ConstraintH, AnalyticCos2) {
  for (double e : {0.1, 0.03, 0.2}) {
    const auto p = single_mode(2 * kPi, 1, 256, 2, e);
    const double exact = -e * e + 1.75 * std::pow(e, 4);
    EXPECT_NEAR(constraint_h(p), exact, 1e-13);
    EXPECT_NEAR(constraint_h_from_speed(p), exact, 1e-12);
  }
  EXPECT_NEAR(constraint_h(single_mode(2 * kPi, 1, 256, 2, 0.1)), -0.009825, 1e-13);
}

TEST(ConstraintH, OddUnderOrientationReversal) {
  // Reversing orientation flips k and omega; h flips sign with it.
  std::mt19937_64 rng(1);
  const auto p = make_perturbed_circle(2 * kPi, 1, 128, random_modes(rng, 6, 0.1));
  const CurvatureProfile reversed(p.k() * -1.0, p.length(), -1);
  EXPECT_NEAR(constraint_h(reversed), -constraint_h(p), 1e-14);
}

TEST(TangentialT, CircleIsZero) {
  const auto p = make_circle(2 * kPi, 1, 64);
  EXPECT_LE(tangential_T(p, GridFunction::constant(64, 2 * kPi, 0.0)).max_abs(), 0.0);
}

TEST(TangentialT, ConstraintMakesKFMeanZero) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = make_perturbed_circle(2 * kPi, 1 + trial % 2, 128,
                                         random_modes(rng, 10, 0.15));
    const auto F = speed_G(p) + constraint_h(p);
    EXPECT_LE(std::abs(integrate(p.k() * F)), 1e-10);
    EXPECT_NO_THROW(tangential_T(p, F));
  }
}

TEST(TangentialT, MatchesNaivePrimitive) {
  const auto p = single_mode(2 * kPi, 1, 256, 2, 0.1);
  std::vector<double> kf(p.size());
  const double h = -0.01 + 1.75e-4;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double s = p.k().node(j);
    kf[j] = (1 + 0.1 * std::cos(2 * s)) * (speed_cos2(0.1, s) + h);
  }
  const auto expected = naive_primitive(kf, 2 * kPi);
  const auto T = tangential_T(p, speed_G(p) + constraint_h(p));
  for (std::size_t j = 0; j < p.size(); ++j) {
    EXPECT_NEAR(T[j], expected[j], 1e-8);
  }
}

TEST(TangentialT, WrongConstraintIsRejected) {
  const auto p = single_mode(2 * kPi, 1, 128, 2, 0.1);
  EXPECT_THROW(tangential_T(p, speed_G(p)), MeanNotZero);
}

TEST(Rhs, CircleIsFixedPoint) {
  for (int omega : {1, 2}) {
    EXPECT_LE(rhs(make_circle(2 * kPi, omega, 128)).max_abs(), 1e-12);
  }
}

TEST(Rhs, ConservesWinding) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = make_perturbed_circle(2 * kPi, 1, 128, random_modes(rng, 8, 0.05));
    EXPECT_LE(std::abs(integrate(rhs(p))), 1e-10);
    EXPECT_LE(std::abs(integrate(rhs(p, true))), 1e-10);
  }
}

TEST(Rhs, LinearizationOracle) {
  // Samples of k are quantized at ~1e-16 and the operator is sixth order, so
  // the grid is kept coarse enough that (N/2)^6 * 1e-16 << eps * lambda.
  const double eps = 1e-6;
  struct Case {
    double length;
    int omega;
    int m;
  };
  for (const Case c : {Case{2 * kPi, 1, 2}, Case{2 * kPi, 1, 3}, Case{2 * kPi, 2, 3},
                       Case{4 * kPi, 1, 2}, Case{3.0, 1, 4}}) {
    const auto p = single_mode(c.length, c.omega, 32, c.m, eps);
    const double kbar = p.target_curvature();
    const double q = 2 * kPi * c.m / c.length;
    const double lambda = -q * q * std::pow(q * q - kbar * kbar, 2);
    const auto r = rhs(p);
    double worst = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double expected = eps * lambda * std::cos(q * p.k().node(j));
      worst = std::max(worst, std::abs(r[j] - expected));
    }
    EXPECT_LE(worst, 1e-3 * std::abs(eps * lambda)) << "m=" << c.m << " omega=" << c.omega;
  }
}

TEST(ImplicitSymbol, MatchesLinearization) {
  const double length = 2 * kPi;
  EXPECT_EQ(implicit_symbol(0, length, 1.0), 0.0);
  EXPECT_NEAR(implicit_symbol(1, length, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(implicit_symbol(2, length, 1.0), -36.0, 1e-12);
  EXPECT_NEAR(implicit_symbol(3, length, 1.0), -576.0, 1e-10);
  EXPECT_NEAR(implicit_symbol(3, length, 2.0), -225.0, 1e-10);
}

TEST(Step, CircleStaysFixedForEveryScheme) {
  for (Scheme scheme : {Scheme::imex_euler, Scheme::imex_bdf2, Scheme::explicit_rk4}) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = scheme == Scheme::explicit_rk4 ? 1e-6 : 1e-3;
    FlowState state = initial_state(make_circle(2 * kPi, 1, 32));
    for (int i = 0; i < 500; ++i) {
      state = step(state, cfg);
    }
    EXPECT_LE(sup_deviation(state.profile), 1e-12) << to_string(scheme);
    EXPECT_EQ(state.step_index, 500u);
    EXPECT_NEAR(state.t, 500 * cfg.dt, 1e-12);
  }
}

TEST(Step, SingleModeDecaysAtLinearRate) {
  // IMEX Euler on a linear mode: amplitude factor 1 / (1 - dt lambda) per step.
  const double eps = 1e-8;
  const auto p = single_mode(2 * kPi, 1, 64, 2, eps);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::imex_euler;
  cfg.dt = 1e-3;
  const auto next = step(initial_state(p), cfg);
  EXPECT_NEAR(next.profile.k()[0] - 1.0, eps / (1 + 1e-3 * 36.0), 1e-6 * eps);
}

TEST(Step, BlowupCapIsEnforced) {
  const auto p = single_mode(2 * kPi, 1, 64, 2, 0.5);
  IntegratorConfig cfg;
  cfg.stop.blowup_cap = 1.2;
  EXPECT_THROW(step(initial_state(p), cfg), Blowup);
}

TEST(Step, RejectsInvalidConfig) {
  IntegratorConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(step(initial_state(make_circle(2 * kPi, 1, 32)), cfg), InvalidArgument);
  cfg.dt = 1e-3;
  cfg.stop.blowup_cap = -1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Run, CircleIsStationary) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.stop.t_max = 1.0;
  cfg.stop.energy_tol = 1e-16;
  const auto record = run(make_circle(2 * kPi, 1, 64), cfg);
  EXPECT_EQ(record.status, RunStatus::Stationary);
  EXPECT_EQ(record.rows.size(), 1001u);
  for (const RunRow &row : record.rows) {
    EXPECT_LE(row.energy, 1e-20);
  }
  EXPECT_NEAR(record.rows.back().t, 1.0, 1e-12);
}

TEST(Run, ConvergesAndRecordsMonotoneTime) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.stop.t_max = 10.0;
  cfg.stop.energy_tol = 1e-16;
  const auto record = run(single_mode(2 * kPi, 1, 64, 2, 1e-3), cfg);
  EXPECT_EQ(record.status, RunStatus::Converged);
  EXPECT_LE(record.rows.back().energy, 1e-16);
  for (std::size_t i = 1; i < record.rows.size(); ++i) {
    EXPECT_GT(record.rows[i].t, record.rows[i - 1].t);
  }
  EXPECT_EQ(record.final_curvature.size(), 64u);
}

TEST(Run, BlowupIsRecordedNotThrown) {
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.stop.t_max = 1.0;
  cfg.stop.blowup_cap = 5.0;
  const Mode modes[] = {{3, 2.5, 0.0}, {7, 1.5, 0.3}};
  const auto p = make_perturbed_circle(2 * kPi, 1, 128, modes);
  RunRecord record;
  ASSERT_NO_THROW(record = run(p, cfg));
  EXPECT_EQ(record.status, RunStatus::Blowup);
  EXPECT_FALSE(record.message.empty());
}

TEST(Run, Deterministic) {
  IntegratorConfig cfg;
  cfg.dt = 1e-4;
  cfg.stop.t_max = 0.05;
  std::mt19937_64 rng(8);
  const auto p = make_perturbed_circle(2 * kPi, 1, 64, random_modes(rng, 6, 0.05));
  const auto a = run(p, cfg);
  const auto b = run(p, cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].energy, b.rows[i].energy);
    EXPECT_EQ(a.rows[i].h, b.rows[i].h);
  }
  EXPECT_EQ(a.final_curvature, b.final_curvature);
}
