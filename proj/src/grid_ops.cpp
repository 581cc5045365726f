#include "icflow/grid_ops.hpp"

#include "icflow/errors.hpp"
#include "icflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icflow {

GridFunction::GridFunction(std::vector<double> samples, double domain_length)
    : samples_(std::move(samples)), length_(domain_length) {
  const std::size_t n = samples_.size();
  if (n < 16 || n % 2 != 0) {
    throw InvalidArgument("grid size must be even and >= 16, got " +
                          std::to_string(n));
  }
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw InvalidArgument("domain length must be positive and finite");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(samples_[j])) {
      throw InvalidArgument("non-finite sample at node " + std::to_string(j));
    }
  }
}

GridFunction GridFunction::constant(std::size_t n, double domain_length,
                                    double value) {
  return GridFunction(std::vector<double>(n, value), domain_length);
}

GridFunction GridFunction::sample(std::size_t n, double domain_length,
                                  const std::function<double(double)> &f) {
  std::vector<double> values(n);
  const double h = domain_length / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = f(static_cast<double>(j) * h);
  }
  return GridFunction(std::move(values), domain_length);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : samples_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

bool GridFunction::compatible(const GridFunction &other) const {
  return size() == other.size() && length_ == other.length_;
}

template <class Op>
GridFunction GridFunction::combine(const GridFunction &other, Op op) const {
  if (!compatible(other)) {
    throw InvalidArgument("grid functions live on different grids");
  }
  std::vector<double> out(size());
  for (std::size_t j = 0; j < size(); ++j) {
    out[j] = op(samples_[j], other.samples_[j]);
  }
  return GridFunction(std::move(out), length_);
}

GridFunction GridFunction::operator+(const GridFunction &other) const {
  return combine(other, [](double a, double b) { return a + b; });
}

GridFunction GridFunction::operator-(const GridFunction &other) const {
  return combine(other, [](double a, double b) { return a - b; });
}

GridFunction GridFunction::operator*(const GridFunction &other) const {
  return combine(other, [](double a, double b) { return a * b; });
}

GridFunction GridFunction::operator*(double scale) const {
  std::vector<double> out(samples_);
  for (double &v : out) {
    v *= scale;
  }
  return GridFunction(std::move(out), length_);
}

GridFunction GridFunction::operator+(double shift) const {
  std::vector<double> out(samples_);
  for (double &v : out) {
    v += shift;
  }
  return GridFunction(std::move(out), length_);
}

GridFunction deriv(const GridFunction &f, int order) {
  if (order < 1) {
    throw InvalidArgument("derivative order must be >= 1");
  }
  auto coeffs = spectral::forward(f.samples());
  spectral::differentiate(coeffs, order, f.size(), f.domain_length());
  return GridFunction(spectral::inverse(coeffs, f.size()), f.domain_length());
}

double integrate(const GridFunction &f) {
  double sum = 0.0;
  for (double v : f.samples()) {
    sum += v;
  }
  return f.spacing() * sum;
}

GridFunction antideriv(const GridFunction &f, double mean_zero_tol) {
  const double total = integrate(f);
  const double tol = mean_zero_tol * (1.0 + f.max_abs() * f.domain_length());
  if (std::abs(total) > tol) {
    throw MeanNotZero(total, tol);
  }
  const std::size_t n = f.size();
  auto coeffs = spectral::forward(f.samples());
  coeffs[0] = 0.0;
  // Integrating the Nyquist mode cos(pi N s / L) gives a pure sine that
  // vanishes at every node, so it drops out.
  coeffs[n / 2] = 0.0;
  for (std::size_t j = 1; j < n / 2; ++j) {
    const double q = spectral::wavenumber(j, f.domain_length());
    coeffs[j] /= std::complex<double>(0.0, q);
  }
  auto values = spectral::inverse(coeffs, n);
  const double offset = values[0];
  for (double &v : values) {
    v -= offset;
  }
  return GridFunction(std::move(values), f.domain_length());
}

GridFunction dealias(const GridFunction &f) {
  auto coeffs = spectral::forward(f.samples());
  spectral::truncate_two_thirds(coeffs, f.size());
  return GridFunction(spectral::inverse(coeffs, f.size()), f.domain_length());
}

} // namespace icflow
