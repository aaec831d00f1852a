#include "qheom/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace qheom {

void validate(const LorentzBath& bath) {
  if (!(bath.lambda > 0.0)) {
    throw std::invalid_argument("LorentzBath: lambda must be > 0");
  }
  if (!(bath.gamma >= 0.0)) {
    throw std::invalid_argument("LorentzBath: gamma must be >= 0");
  }
  if (!(bath.omega0 > 0.0)) {
    throw std::invalid_argument("LorentzBath: omega0 must be > 0");
  }
}

double spectral_density(const LorentzBath& bath, double omega) {
  validate(bath);
  if (bath.gamma == 0.0) {
    throw std::invalid_argument(
        "spectral_density: gamma = 0 is a delta distribution; use the "
        "single-mode oracle instead");
  }
  const double detuning = omega - bath.omega0;
  return bath.lambda * bath.gamma /
         (M_PI * (detuning * detuning + bath.gamma * bath.gamma));
}

Complex correlation(const LorentzBath& bath, double t) {
  validate(bath);
  if (t < 0.0) {
    throw std::invalid_argument("correlation: t must be >= 0");
  }
  return bath.lambda * std::exp(-Complex(bath.gamma, bath.omega0) * t);
}

ExponentialDecomposition decompose(const LorentzBath& bath) {
  validate(bath);
  ExponentialDecomposition decomp;
  // nu_k = gamma + (-1)^k i omega0, k = 1, 2
  decomp.nu = {Complex(bath.gamma, -bath.omega0),
               Complex(bath.gamma, bath.omega0)};
  decomp.real_coeffs = {Complex(bath.lambda / 2, 0),
                        Complex(bath.lambda / 2, 0)};
  // (-1)^k lambda/(2i) = -(-1)^k i lambda/2
  decomp.imag_coeffs = {Complex(0, bath.lambda / 2),
                        Complex(0, -bath.lambda / 2)};
  return decomp;
}

}  // namespace qheom
