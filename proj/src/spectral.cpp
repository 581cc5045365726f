#include "icflow/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace icflow::spectral {

namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; executing an existing plan on new arrays
// is. Plans are created once per size under the lock and never destroyed.
// FFTW_ESTIMATE keeps the chosen algorithm, hence the bits, reproducible.
const PlanPair &plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) {
    return it->second;
  }
  const int size = static_cast<int>(n);
  std::vector<double> real(n);
  Spectrum complex(n / 2 + 1);
  auto *cbuf = reinterpret_cast<fftw_complex *>(complex.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair pair;
  pair.r2c = fftw_plan_dft_r2c_1d(size, real.data(), cbuf, flags);
  pair.c2r = fftw_plan_dft_c2r_1d(size, cbuf, real.data(), flags);
  return cache.emplace(n, pair).first->second;
}

} // namespace

Spectrum forward(std::span<const double> samples) {
  const std::size_t n = samples.size();
  const PlanPair &plans = plans_for(n);
  // r2c does not modify its input, but the API takes a non-const pointer.
  std::vector<double> in(samples.begin(), samples.end());
  Spectrum out(n / 2 + 1);
  fftw_execute_dft_r2c(plans.r2c, in.data(),
                       reinterpret_cast<fftw_complex *>(out.data()));
  return out;
}

std::vector<double> inverse(const Spectrum &coeffs, std::size_t n) {
  const PlanPair &plans = plans_for(n);
  Spectrum in = coeffs; // c2r destroys its input
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex *>(in.data()),
                       out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (double &v : out) {
    v *= scale;
  }
  return out;
}

double wavenumber(std::size_t index, double domain_length) {
  return 2.0 * std::numbers::pi * static_cast<double>(index) / domain_length;
}

void differentiate(Spectrum &coeffs, int order, std::size_t n,
                   double domain_length) {
  const std::size_t nyquist = n / 2;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (order % 2 == 1 && j == nyquist) {
      coeffs[j] = 0.0;
      continue;
    }
    const double q = wavenumber(j, domain_length);
    // (iq)^order = q^order * i^order
    std::complex<double> factor = std::pow(q, order);
    switch (order % 4) {
    case 1:
      factor *= std::complex<double>(0.0, 1.0);
      break;
    case 2:
      factor = -factor;
      break;
    case 3:
      factor *= std::complex<double>(0.0, -1.0);
      break;
    default:
      break;
    }
    coeffs[j] *= factor;
  }
}

void truncate_two_thirds(Spectrum &coeffs, std::size_t n) {
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (3 * j > n) {
      coeffs[j] = 0.0;
    }
  }
}

} // namespace icflow::spectral
