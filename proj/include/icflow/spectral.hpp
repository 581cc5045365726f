#pragma once

// Real-to-complex transforms on uniform periodic grids. Thin layer over FFTW;
// plans are cached per size and shared, execution buffers are per call.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace icflow::spectral {

/// Half spectrum of a real signal of even length n: n/2 + 1 coefficients,
/// unnormalized (forward transform is a plain DFT sum).
using Spectrum = std::vector<std::complex<double>>;

Spectrum forward(std::span<const double> samples);

/// Inverse of forward(); divides by n.
std::vector<double> inverse(const Spectrum &coeffs, std::size_t n);

/// Angular wavenumber 2*pi*j/L of mode index j.
double wavenumber(std::size_t index, double domain_length);

/// Multiply by (i q)^order in place. Odd orders zero the Nyquist mode.
void differentiate(Spectrum &coeffs, int order, std::size_t n,
                   double domain_length);

/// Two-thirds rule: zero every mode with 3*j > n.
void truncate_two_thirds(Spectrum &coeffs, std::size_t n);

} // namespace icflow::spectral
