#pragma once

// Periodic spectral calculus on uniform grids.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace icflow {

/// Relative tolerance for the mean-zero precondition of antideriv().
inline constexpr double kMeanZeroTol = 1e-10;

/// N uniform samples of a real L-periodic function at s_j = j L / N.
///
/// N must be even and at least 16, L positive, samples finite. Values are
/// immutable after construction; arithmetic returns new objects.
class GridFunction {
public:
  GridFunction(std::vector<double> samples, double domain_length);

  static GridFunction constant(std::size_t n, double domain_length,
                               double value);
  static GridFunction sample(std::size_t n, double domain_length,
                             const std::function<double(double)> &f);

  std::size_t size() const { return samples_.size(); }
  double domain_length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(size()); }
  double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t j) const { return samples_[j]; }

  double max_abs() const;

  GridFunction operator+(const GridFunction &other) const;
  GridFunction operator-(const GridFunction &other) const;
  /// Pointwise product.
  GridFunction operator*(const GridFunction &other) const;
  GridFunction operator*(double scale) const;
  GridFunction operator+(double shift) const;
  GridFunction operator-(double shift) const { return *this + (-shift); }

  /// True when both grids have the same size and length.
  bool compatible(const GridFunction &other) const;

private:
  template <class Op>
  GridFunction combine(const GridFunction &other, Op op) const;

  std::vector<double> samples_;
  double length_;
};

inline GridFunction operator*(double scale, const GridFunction &f) {
  return f * scale;
}

/// Spectral derivative of the trigonometric interpolant. order >= 1.
GridFunction deriv(const GridFunction &f, int order);

/// (L/N) * sum of samples; exact for integrands below Nyquist.
double integrate(const GridFunction &f);

/// Periodic primitive F with F(0) = 0 and F' = f.
/// Throws MeanNotZero unless |integrate(f)| <= tol * (1 + ||f||_inf * L).
GridFunction antideriv(const GridFunction &f, double mean_zero_tol = kMeanZeroTol);

/// Zero every mode with index above N/3.
GridFunction dealias(const GridFunction &f);

} // namespace icflow
