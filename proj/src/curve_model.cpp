#include "icflow/curve_model.hpp"

#include "icflow/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace icflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// theta(s_j) - base_angle at the nodes, using the measured mean curvature so
// the primitive of the remainder is exactly periodic.
GridFunction turning_angle(const GridFunction &k, double base_angle) {
  const double mean = integrate(k) / k.domain_length();
  GridFunction oscillation = antideriv(k - mean);
  std::vector<double> theta(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    theta[j] = base_angle + mean * k.node(j) + oscillation[j];
  }
  return GridFunction(std::move(theta), k.domain_length());
}

GridFunction map(const GridFunction &f, double (*fn)(double)) {
  std::vector<double> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    out[j] = fn(f[j]);
  }
  return GridFunction(std::move(out), f.domain_length());
}

// Solve the 3x3 system a x = b by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                             std::array<double, 3> b) {
  double scale = 0.0;
  for (const auto &row : a) {
    for (double v : row) {
      scale = std::max(scale, std::abs(v));
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
        pivot = row;
      }
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (std::abs(a[col][col]) <= 1e-12 * scale) {
      throw InvalidArgument("circle fit is degenerate (collinear points)");
    }
    for (int row = col + 1; row < 3; ++row) {
      const double factor = a[row][col] / a[col][col];
      for (int c = col; c < 3; ++c) {
        a[row][c] -= factor * a[col][c];
      }
      b[row] -= factor * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int row = 2; row >= 0; --row) {
    double acc = b[row];
    for (int c = row + 1; c < 3; ++c) {
      acc -= a[row][c] * x[c];
    }
    x[row] = acc / a[row][row];
  }
  return x;
}

} // namespace

CurvatureProfile::CurvatureProfile(GridFunction k, double length, int omega)
    : k_(std::move(k)), length_(length), omega_(omega) {
  if (omega_ == 0) {
    throw InvalidArgument("winding number must be nonzero");
  }
  if (k_.domain_length() != length_) {
    throw InvalidArgument("curvature grid length differs from curve length");
  }
  const double drift = std::abs(integrate(k_) / kTwoPi - omega_);
  if (!(drift <= kWindingConsistencyTol)) {
    throw InvalidArgument("total curvature inconsistent with winding number " +
                          std::to_string(omega_));
  }
}

double CurvatureProfile::target_curvature() const {
  return kTwoPi * omega_ / length_;
}

CurvatureProfile CurvatureProfile::with_curvature(GridFunction k) const {
  return CurvatureProfile(std::move(k), length_, omega_);
}

CurvatureProfile make_circle(double length, int omega, std::size_t n) {
  if (omega == 0) {
    throw InvalidArgument("omega = 0 has no closed circle");
  }
  return CurvatureProfile(GridFunction::constant(n, length, kTwoPi * omega / length),
                          length, omega);
}

CurvatureProfile make_perturbed_circle(double length, int omega, std::size_t n,
                                       std::span<const Mode> modes) {
  if (omega == 0) {
    throw InvalidArgument("omega = 0 has no closed circle");
  }
  for (const Mode &mode : modes) {
    if (mode.m < 1) {
      throw InvalidArgument("perturbation modes must have m >= 1, got " +
                            std::to_string(mode.m));
    }
  }
  const double kbar = kTwoPi * omega / length;
  auto k = GridFunction::sample(n, length, [&](double s) {
    double value = kbar;
    for (const Mode &mode : modes) {
      value += mode.amplitude * std::cos(kTwoPi * mode.m * s / length + mode.phase);
    }
    return value;
  });
  return CurvatureProfile(std::move(k), length, omega);
}

double winding(const CurvatureProfile &p) { return integrate(p.k()) / kTwoPi; }

double energy(const CurvatureProfile &p) {
  const GridFunction ks = deriv(p.k(), 1);
  return 0.5 * integrate(ks * ks);
}

double mean_curvature(const CurvatureProfile &p) {
  return integrate(p.k()) / p.length();
}

double sup_deviation(const CurvatureProfile &p) {
  return (p.k() - p.target_curvature()).max_abs();
}

double closure_defect(const CurvatureProfile &p) {
  const GridFunction theta = turning_angle(p.k(), 0.0);
  const double dx = integrate(map(theta, [](double t) { return std::cos(t); }));
  const double dy = integrate(map(theta, [](double t) { return std::sin(t); }));
  return std::hypot(dx, dy);
}

ReconstructedCurve reconstruct(const CurvatureProfile &p, Point2 base_point,
                               double base_angle) {
  const std::size_t n = p.size();
  const double length = p.length();
  GridFunction theta = turning_angle(p.k(), base_angle);
  const GridFunction cx = map(theta, [](double t) { return std::cos(t); });
  const GridFunction cy = map(theta, [](double t) { return std::sin(t); });
  const double mean_x = integrate(cx) / length;
  const double mean_y = integrate(cy) / length;
  const GridFunction px = antideriv(cx - mean_x);
  const GridFunction py = antideriv(cy - mean_y);

  ReconstructedCurve curve{.points = {},
                           .theta = theta,
                           .total_turning = integrate(p.k()),
                           .closure_defect = std::hypot(mean_x, mean_y) * length,
                           .best_fit_center = {},
                           .best_fit_radius = 0.0};
  curve.points.reserve(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = theta.node(j);
    curve.points.push_back({base_point.x + px[j] + mean_x * s,
                            base_point.y + py[j] + mean_y * s});
  }
  curve.points.push_back(
      {base_point.x + mean_x * length, base_point.y + mean_y * length});

  const Circle fit = fit_circle(std::span(curve.points).first(n));
  curve.best_fit_center = fit.center;
  curve.best_fit_radius = fit.radius;
  return curve;
}

Circle fit_circle(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw InvalidArgument("circle fit needs at least three points");
  }
  // Center the data for conditioning, then minimize
  // sum (x^2 + y^2 + D x + E y + F)^2 over (D, E, F).
  double cx = 0.0;
  double cy = 0.0;
  for (const Point2 &pt : points) {
    cx += pt.x;
    cy += pt.y;
  }
  cx /= static_cast<double>(points.size());
  cy /= static_cast<double>(points.size());

  std::array<std::array<double, 3>, 3> normal{};
  std::array<double, 3> rhs{};
  for (const Point2 &pt : points) {
    const double x = pt.x - cx;
    const double y = pt.y - cy;
    const std::array<double, 3> row{x, y, 1.0};
    const double z = x * x + y * y;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        normal[i][j] += row[i] * row[j];
      }
      rhs[i] -= row[i] * z;
    }
  }
  const auto [d, e, f] = solve3(normal, rhs);
  const double a = -0.5 * d;
  const double b = -0.5 * e;
  const double r2 = a * a + b * b - f;
  if (!(r2 > 0.0)) {
    throw InvalidArgument("circle fit produced a non-positive radius");
  }
  return Circle{{a + cx, b + cy}, std::sqrt(r2)};
}

} // namespace icflow
