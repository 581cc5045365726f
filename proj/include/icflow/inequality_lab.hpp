#pragma once

// Randomized checks of the periodic inequalities the flow analysis rests on,
// and empirical fits of the constants that are only known to exist.

#include "icflow/curve_model.hpp"
#include "icflow/grid_ops.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace icflow {

struct AmplitudeLaw {
  enum class Kind { uniform, decaying };
  Kind kind = Kind::uniform;
  double a_max = 0.5;
  /// Decay exponent for Kind::decaying: a_m ~ U[0, a_max] * (min_mode / m)^p.
  double p = 2.0;

  bool operator==(const AmplitudeLaw &) const = default;
};

struct SamplerSettings {
  std::uint64_t seed = 0;
  int max_mode = 8;
  AmplitudeLaw amplitude;
  double length = 6.283185307179586;
  int omega = 1;
  std::size_t grid_size = 256;

  bool operator==(const SamplerSettings &) const = default;
};

/// Seeded source of random band-limited profiles. Same seed, same sequence,
/// on every platform (mt19937_64 output mapped to doubles by hand).
class ProfileSampler {
public:
  explicit ProfileSampler(SamplerSettings settings);

  const SamplerSettings &settings() const { return settings_; }

  /// Random perturbation modes with m in [2, max_mode].
  std::vector<Mode> next_modes();
  CurvatureProfile next_profile();
  /// Mean-zero function with modes in [1, max_mode].
  GridFunction next_mean_zero();

private:
  double uniform01();
  double amplitude_for(int m, int min_mode);

  SamplerSettings settings_;
  std::mt19937_64 engine_;
};

/// Both sides of the Wirtinger-type inequalities for mean-zero f of period P:
///   (i)  int f^2     <= P^2 / (4 pi^2) int f'^2
///   (ii) ||f||_inf^2 <= P / (2 pi)     int f'^2
struct PswSides {
  double lhs_i = 0.0;
  double rhs_i = 0.0;
  double lhs_ii = 0.0;
  double rhs_ii = 0.0;
};

/// Throws MeanNotZero if |integrate(f)| exceeds the mean-zero tolerance.
PswSides check_psw(const GridFunction &f);

/// L ||k||_inf  versus  sqrt(L^3 int k_s^2) + 2 pi |omega|.
struct KsupSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

KsupSides check_ksup(const CurvatureProfile &p);

struct ConstantFitReport {
  std::string id;
  std::size_t samples = 0;
  /// Worst lhs / rhs ratio seen (largest for upper bounds, smallest for the
  /// lower bound of the G^2 study).
  double worst_ratio = 0.0;
  double fitted_constant = 0.0;
  /// Second constant of a two-constant inequality (0 when not applicable).
  double paired_constant = 0.0;
  std::size_t violations = 0;
  double slack = 0.0;
};

/// PSW (i) and (ii) on sampler.next_mean_zero(). Violation: lhs > rhs + slack.
ConstantFitReport psw_suite(ProfileSampler &sampler, std::size_t n_samples,
                            double slack = 1e-10);

ConstantFitReport ksup_suite(ProfileSampler &sampler, std::size_t n_samples,
                             double slack = 1e-10);

/// int G^2 >= c_omega int k_ssss^2 - c E^2 (1 + E^3).
///
/// fitted_constant is the largest c_omega for which the sample satisfies the
/// inequality with c = 0 (the minimum ratio int G^2 / int k_ssss^2). If
/// c_omega > 0 is supplied instead, paired_constant is the smallest c making
/// the inequality hold for that c_omega. Requires n_samples >= 100.
ConstantFitReport empirical_g2_study(ProfileSampler &sampler,
                                     std::size_t n_samples,
                                     double c_omega = 0.0);

/// Monomial prod_j d^{orders[j]} k; n = orders.size(), m = sum of orders.
struct Monomial {
  std::vector<int> orders;
  int n() const { return static_cast<int>(orders.size()); }
  int m() const;
};

/// Scale-invariant Sobolev norm sum_{j<=l} L^{j+1/2} ||k_{s^j}||_2.
double scale_invariant_norm(const CurvatureProfile &p, int l);

/// Ratio int |P| / (L^{1-m-n} ||k||_2^{n-p} ||k||_{l,2}^p) for one profile,
/// p = (m + n/2 - 1) / l. Throws RegimeViolation unless p < 2 and every
/// derivative order is at most l - 1.
double interpolation_ratio(const CurvatureProfile &p, const Monomial &term, int l);

/// Largest interpolation_ratio over the sample: the empirical constant c.
ConstantFitReport interpolation_report(ProfileSampler &sampler,
                                       const Monomial &term, int l,
                                       std::size_t n_samples);

} // namespace icflow
