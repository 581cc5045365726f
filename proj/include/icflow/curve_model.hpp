#pragma once

// Closed planar curves of fixed length, represented by their arclength
// curvature profile on [0, L0).

#include "icflow/grid_ops.hpp"

#include <span>
#include <vector>

namespace icflow {

/// Tolerance on |integral(k) / 2pi - omega| accepted by CurvatureProfile.
inline constexpr double kWindingConsistencyTol = 1e-6;

/// Curvature k(s) of a closed curve of length L0 and winding number omega.
///
/// Orientation: a positively traversed omega-circle has k = +2 pi omega / L0.
/// Construction checks k's domain length equals L0 and that the total
/// curvature matches 2 pi omega (Gauss-Bonnet).
class CurvatureProfile {
public:
  CurvatureProfile(GridFunction k, double length, int omega);

  const GridFunction &k() const { return k_; }
  double length() const { return length_; }
  int omega() const { return omega_; }
  std::size_t size() const { return k_.size(); }

  /// 2 pi omega / L0, the curvature of the limiting circle.
  double target_curvature() const;

  /// Same length and winding, new samples. Re-validates.
  CurvatureProfile with_curvature(GridFunction k) const;

private:
  GridFunction k_;
  double length_;
  int omega_;
};

struct Mode {
  int m = 2;               ///< number of oscillations over [0, L0)
  double amplitude = 0.0;
  double phase = 0.0;

  bool operator==(const Mode &) const = default;
};

CurvatureProfile make_circle(double length, int omega, std::size_t n);

/// k(s) = 2 pi omega / L0 + sum_i a_i cos(2 pi m_i s / L0 + phi_i).
/// Rejects m < 1. m = 1 is allowed but is a neutral (translation) mode for
/// omega = 1.
CurvatureProfile make_perturbed_circle(double length, int omega, std::size_t n,
                                       std::span<const Mode> modes);

/// integral(k) / 2 pi.
double winding(const CurvatureProfile &p);

/// E = 1/2 integral(k_s^2).
double energy(const CurvatureProfile &p);

/// integral(k) / L0.
double mean_curvature(const CurvatureProfile &p);

/// max over nodes of |k - kbar| with kbar = 2 pi omega / L0.
double sup_deviation(const CurvatureProfile &p);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Circle {
  Point2 center;
  double radius = 0.0;
};

struct ReconstructedCurve {
  std::vector<Point2> points; ///< N + 1 positions; last is gamma(L0)
  GridFunction theta;         ///< tangent angle at the N nodes
  double total_turning = 0.0; ///< theta(L0) - theta(0)
  double closure_defect = 0.0;
  Point2 best_fit_center;
  double best_fit_radius = 0.0;
};

/// Integrates theta_s = k and gamma_s = (cos theta, sin theta) spectrally.
ReconstructedCurve reconstruct(const CurvatureProfile &p, Point2 base_point = {},
                               double base_angle = 0.0);

/// |gamma(L0) - gamma(0)| without building the full point set.
double closure_defect(const CurvatureProfile &p);

/// Algebraic (Kasa) least-squares circle through the points.
Circle fit_circle(std::span<const Point2> points);

} // namespace icflow
