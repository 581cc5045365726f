#include "icflow/inequality_lab.hpp"

#include "icflow/errors.hpp"
#include "icflow/flow_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace icflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double l2sq(const GridFunction &f) { return integrate(f * f); }

void check_regime(const Monomial &term, int l) {
  const int n = term.n();
  if (l < 1 || n < 2) {
    throw RegimeViolation("interpolation needs l >= 1 and at least two factors");
  }
  if (2 * term.m() + n >= 4 * l + 2) {
    throw RegimeViolation("m + n/2 >= 2l + 1, so p >= 2");
  }
  for (int order : term.orders) {
    if (order < 0 || order > l - 1) {
      throw RegimeViolation("monomial contains a derivative above order l - 1");
    }
  }
}

} // namespace

ProfileSampler::ProfileSampler(SamplerSettings settings)
    : settings_(settings), engine_(settings.seed) {
  if (settings_.max_mode < 2) {
    throw InvalidArgument("sampler max_mode must be >= 2");
  }
  if (3 * static_cast<std::size_t>(settings_.max_mode) > settings_.grid_size) {
    throw InvalidArgument("sampler max_mode is not resolved by the grid");
  }
  if (!(settings_.amplitude.a_max >= 0.0)) {
    throw InvalidArgument("sampler a_max must be nonnegative");
  }
}

double ProfileSampler::uniform01() {
  // 53 random bits -> [0, 1); std::uniform_real_distribution is not portable.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double ProfileSampler::amplitude_for(int m, int min_mode) {
  const AmplitudeLaw &law = settings_.amplitude;
  const double a = law.a_max * uniform01();
  if (law.kind == AmplitudeLaw::Kind::decaying) {
    return a * std::pow(static_cast<double>(min_mode) / m, law.p);
  }
  return a;
}

std::vector<Mode> ProfileSampler::next_modes() {
  std::vector<Mode> modes;
  for (int m = 2; m <= settings_.max_mode; ++m) {
    const double amplitude = amplitude_for(m, 2);
    const double phase = kTwoPi * uniform01();
    modes.push_back(Mode{m, amplitude, phase});
  }
  return modes;
}

CurvatureProfile ProfileSampler::next_profile() {
  const auto modes = next_modes();
  return make_perturbed_circle(settings_.length, settings_.omega,
                               settings_.grid_size, modes);
}

GridFunction ProfileSampler::next_mean_zero() {
  std::vector<Mode> modes;
  for (int m = 1; m <= settings_.max_mode; ++m) {
    const double amplitude = amplitude_for(m, 1);
    const double phase = kTwoPi * uniform01();
    modes.push_back(Mode{m, amplitude, phase});
  }
  const double length = settings_.length;
  return GridFunction::sample(settings_.grid_size, length, [&](double s) {
    double value = 0.0;
    for (const Mode &mode : modes) {
      value += mode.amplitude * std::cos(kTwoPi * mode.m * s / length + mode.phase);
    }
    return value;
  });
}

PswSides check_psw(const GridFunction &f) {
  const double total = integrate(f);
  const double tol = kMeanZeroTol * (1.0 + f.max_abs() * f.domain_length());
  if (std::abs(total) > tol) {
    throw MeanNotZero(total, tol);
  }
  const double period = f.domain_length();
  const double slope_sq = l2sq(deriv(f, 1));
  const double sup = f.max_abs();
  return PswSides{l2sq(f), period * period / (kTwoPi * kTwoPi) * slope_sq,
                  sup * sup, period / kTwoPi * slope_sq};
}

KsupSides check_ksup(const CurvatureProfile &p) {
  const double length = p.length();
  const double slope_sq = l2sq(deriv(p.k(), 1));
  return KsupSides{length * p.k().max_abs(),
                   std::sqrt(length * length * length * slope_sq) +
                       kTwoPi * std::abs(p.omega())};
}

ConstantFitReport psw_suite(ProfileSampler &sampler, std::size_t n_samples,
                            double slack) {
  ConstantFitReport report{.id = "psw", .samples = n_samples, .slack = slack};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const GridFunction f = sampler.next_mean_zero();
    const PswSides sides = check_psw(f);
    if (sides.lhs_i > sides.rhs_i + slack) {
      ++report.violations;
    }
    if (sides.lhs_ii > sides.rhs_ii + slack) {
      ++report.violations;
    }
    if (sides.rhs_i > 0.0) {
      report.worst_ratio = std::max({report.worst_ratio, sides.lhs_i / sides.rhs_i,
                                     sides.lhs_ii / sides.rhs_ii});
      const double slope_sq = sides.rhs_ii * kTwoPi / f.domain_length();
      report.fitted_constant = std::max(report.fitted_constant, sides.lhs_i / slope_sq);
      report.paired_constant = std::max(report.paired_constant, sides.lhs_ii / slope_sq);
    }
  }
  return report;
}

ConstantFitReport ksup_suite(ProfileSampler &sampler, std::size_t n_samples,
                             double slack) {
  ConstantFitReport report{.id = "ksup", .samples = n_samples, .slack = slack};
  for (std::size_t i = 0; i < n_samples; ++i) {
    const KsupSides sides = check_ksup(sampler.next_profile());
    if (sides.lhs > sides.rhs + slack) {
      ++report.violations;
    }
    report.worst_ratio = std::max(report.worst_ratio, sides.lhs / sides.rhs);
  }
  report.fitted_constant = report.worst_ratio;
  return report;
}

ConstantFitReport empirical_g2_study(ProfileSampler &sampler,
                                     std::size_t n_samples, double c_omega) {
  if (n_samples < 100) {
    throw InvalidArgument("the G^2 study needs at least 100 samples");
  }
  ConstantFitReport report{.id = "g2_lower_bound", .samples = n_samples};
  double min_ratio = std::numeric_limits<double>::infinity();
  double paired = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const CurvatureProfile p = sampler.next_profile();
    const GridFunction G = speed_G(p);
    const double g_sq = l2sq(G);
    const double k4_sq = l2sq(deriv(p.k(), 4));
    const double e = energy(p);
    if (k4_sq > 0.0) {
      min_ratio = std::min(min_ratio, g_sq / k4_sq);
    }
    if (c_omega > 0.0) {
      const double deficit = c_omega * k4_sq - g_sq;
      const double weight = e * e * (1.0 + e * e * e);
      if (deficit > 0.0) {
        paired = weight > 0.0 ? std::max(paired, deficit / weight)
                              : std::numeric_limits<double>::infinity();
      }
    }
  }
  report.worst_ratio = std::isfinite(min_ratio) ? min_ratio : 0.0;
  if (c_omega > 0.0) {
    report.fitted_constant = c_omega;
    report.paired_constant = paired;
  } else {
    report.fitted_constant = std::max(report.worst_ratio, 0.0);
  }
  return report;
}

int Monomial::m() const { return std::accumulate(orders.begin(), orders.end(), 0); }

double scale_invariant_norm(const CurvatureProfile &p, int l) {
  const double length = p.length();
  double norm = std::sqrt(length * l2sq(p.k()));
  for (int j = 1; j <= l; ++j) {
    norm += std::pow(length, j + 0.5) * std::sqrt(l2sq(deriv(p.k(), j)));
  }
  return norm;
}

double interpolation_ratio(const CurvatureProfile &p, const Monomial &term, int l) {
  check_regime(term, l);
  const int n = term.n();
  const int m = term.m();
  const double exponent = (m + 0.5 * n - 1.0) / l;
  const double length = p.length();

  std::vector<double> product(p.size(), 1.0);
  for (int order : term.orders) {
    const GridFunction factor = order == 0 ? p.k() : deriv(p.k(), order);
    for (std::size_t j = 0; j < product.size(); ++j) {
      product[j] *= factor[j];
    }
  }
  for (double &v : product) {
    v = std::abs(v);
  }
  const double lhs = integrate(GridFunction(std::move(product), length));
  const double k_norm = std::sqrt(length * l2sq(p.k()));
  const double rhs = std::pow(length, 1.0 - m - n) * std::pow(k_norm, n - exponent) *
                     std::pow(scale_invariant_norm(p, l), exponent);
  return lhs / rhs;
}

ConstantFitReport interpolation_report(ProfileSampler &sampler,
                                       const Monomial &term, int l,
                                       std::size_t n_samples) {
  check_regime(term, l);
  ConstantFitReport report{.id = "interpolation", .samples = n_samples};
  for (std::size_t i = 0; i < n_samples; ++i) {
    report.worst_ratio =
        std::max(report.worst_ratio, interpolation_ratio(sampler.next_profile(), term, l));
  }
  report.fitted_constant = report.worst_ratio;
  return report;
}

} // namespace icflow
