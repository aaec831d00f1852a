// bath.hpp — Lorentz coupling spectrum and its exponential correlation decomposition
#pragma once

#include <array>
#include <complex>

namespace qheom {

using Complex = std::complex<double>;

// Natural units: omega0 = 1, hbar = 1. lambda carries units omega0^2,
// gamma units omega0.
struct LorentzBath {
  double lambda = 0.0;   // coupling strength
  double gamma = 0.0;    // cavity-mode broadening; 0 = single undamped mode
  double omega0 = 1.0;   // central mode frequency
};

void validate(const LorentzBath& bath);  // lambda > 0, gamma >= 0, omega0 > 0

// Two-term exponential form of the zero-temperature correlation function:
//   Re C(t) = sum_k real_coeffs[k] exp(-nu[k] t)
//   Im C(t) = sum_k imag_coeffs[k] exp(-nu[k] t)
// with nu_k = gamma + (-1)^k i omega0 (k = 1,2), real coefficients lambda/2
// and imaginary coefficients (-1)^k lambda/(2i).
struct ExponentialDecomposition {
  std::array<Complex, 2> nu;
  std::array<Complex, 2> real_coeffs;
  std::array<Complex, 2> imag_coeffs;
};

// J(omega) = (1/pi) lambda gamma / ((omega - omega0)^2 + gamma^2).
// gamma = 0 is an error: the density degenerates to a delta distribution.
double spectral_density(const LorentzBath& bath, double omega);

// C(t) = lambda exp(-(gamma + i omega0) t), t >= 0.
Complex correlation(const LorentzBath& bath, double t);

ExponentialDecomposition decompose(const LorentzBath& bath);

}  // namespace qheom
