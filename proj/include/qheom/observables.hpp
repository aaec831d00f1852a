// observables.hpp — concurrence, populations, and state-validity diagnostics
#pragma once

#include <array>

#include "qheom/matrix_ops.hpp"

namespace qheom {

struct ObservableRecord {
  double t = 0.0;
  double concurrence = 0.0;  // clamped to [0,1]
  // Diagonal in the fixed basis order |11>, |10>, |01>, |00>.
  std::array<double, 4> populations{};
  double trace_error = 0.0;     // |Tr rho - 1|
  double min_eigenvalue = 0.0;  // of (rho + rho^dag)/2
  double purity = 0.0;          // Tr rho^2
  double concurrence_raw = 0.0;  // unclamped Wootters value; not serialized
};

// Wootters concurrence of a two-qubit density matrix. Entrywise conjugation
// is taken in the fixed product basis above. Requires Hermitian within 1e-6
// and trace 1 within 1e-6.
double concurrence(const Matrix& rho);

// sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4) without the max(0, .) clamp.
double concurrence_raw(const Matrix& rho);

// Fills everything except t and the concurrence fields.
ObservableRecord diagnostics(const Matrix& rho);

}  // namespace qheom
