#include "qheom/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qheom {

namespace {

// sigma_y x sigma_y in the fixed product basis.
const Matrix& spin_flip_operator() {
  static const Matrix yy = ops::kron(ops::sigma_y(), ops::sigma_y());
  return yy;
}

double wootters_combination(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("concurrence: expected a 4x4 density matrix");
  }
  if (ops::hermiticity_error(rho) > 1e-6 ||
      std::abs(rho.trace() - Complex(1.0)) > 1e-6) {
    throw std::invalid_argument("concurrence: not a valid density matrix");
  }
  const Matrix& yy = spin_flip_operator();
  // sqrt(mu_i) for mu_i the eigenvalues of rho Y rho^* Y are the singular
  // values of M = sqrt(rho) Y sqrt(rho)^*, since M M^dag = sqrt(rho) Y rho^*
  // Y sqrt(rho). Going through the singular values avoids taking square
  // roots of eigenvalues that sit at the noise floor.
  Eigen::SelfAdjointEigenSolver<Matrix> es(ops::hermitize(rho));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("concurrence: eigensolver failed");
  }
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix sqrt_rho =
      es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix m = sqrt_rho * yy * sqrt_rho.conjugate();
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  return s(0) - s(1) - s(2) - s(3);
}

}  // namespace

double concurrence_raw(const Matrix& rho) { return wootters_combination(rho); }

double concurrence(const Matrix& rho) {
  return std::max(0.0, wootters_combination(rho));
}

ObservableRecord diagnostics(const Matrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) {
    throw std::invalid_argument("diagnostics: matrix not square");
  }
  ObservableRecord record;
  record.trace_error = std::abs(rho.trace() - Complex(1.0));
  const Matrix sym = ops::hermitize(rho);
  record.min_eigenvalue = ops::hermitian_eigenvalues(sym).back();
  record.purity = (rho * rho).trace().real();
  const int n = std::min<int>(4, static_cast<int>(rho.rows()));
  for (int i = 0; i < n; ++i) {
    record.populations[static_cast<std::size_t>(i)] = rho(i, i).real();
  }
  return record;
}

}  // namespace qheom
