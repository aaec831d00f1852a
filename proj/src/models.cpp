#include "qheom/models.hpp"

#include <cmath>
#include <stdexcept>

namespace qheom {

void validate(const ModelSpec& model) {
  if (model.dim < 1 || model.h_s.rows() != model.dim ||
      model.h_s.cols() != model.dim || model.v.rows() != model.dim ||
      model.v.cols() != model.dim) {
    throw std::invalid_argument("ModelSpec: dimension mismatch");
  }
  if (!ops::is_hermitian(model.h_s, 1e-12)) {
    throw std::invalid_argument("ModelSpec: H_S not Hermitian");
  }
  if (!ops::is_hermitian(model.v, 1e-12)) {
    throw std::invalid_argument("ModelSpec: V not Hermitian");
  }
}

void validate_density_matrix(const Matrix& rho, double herm_tol,
                             double trace_tol, double eig_tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) {
    throw std::invalid_argument("density matrix must be square");
  }
  if (ops::hermiticity_error(rho) > herm_tol) {
    throw std::invalid_argument("density matrix not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0)) > trace_tol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  const auto eigenvalues = ops::hermitian_eigenvalues(ops::hermitize(rho));
  if (eigenvalues.back() < -eig_tol) {
    throw std::invalid_argument("density matrix not positive semidefinite");
  }
}

ModelSpec two_qubit_common_bath(double w1, double w2, double a1, double a2) {
  const Matrix sx = ops::sigma_x();
  const Matrix sz = ops::sigma_z();
  const Matrix id = ops::identity(2);
  ModelSpec model;
  model.dim = 4;
  model.h_s = 0.5 * w1 * ops::kron(sz, id) + 0.5 * w2 * ops::kron(id, sz);
  model.v = a1 * ops::kron(sx, id) + a2 * ops::kron(id, sx);
  model.label = "two-qubit-common-bath";
  return model;
}

ModelSpec single_qubit(double w) {
  ModelSpec model;
  model.dim = 2;
  model.h_s = 0.5 * w * ops::sigma_z();
  model.v = ops::sigma_x();
  model.label = "single-qubit";
  return model;
}

InitialState single_excitation_state(Complex c1, Complex c2) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "single_excitation_state: amplitudes not normalized");
  }
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = c1;  // |10>
  psi(2) = c2;  // |01>
  InitialState state;
  state.rho0 = psi * psi.adjoint();
  state.description = "single-excitation";
  return state;
}

InitialState ground_state_pair() {
  InitialState state;
  state.rho0 = Matrix::Zero(4, 4);
  state.rho0(3, 3) = 1.0;  // |00><00|
  state.description = "ground-pair";
  return state;
}

std::pair<Complex, Complex> named_amplitudes(const std::string& name) {
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s5 = 1.0 / std::sqrt(5.0);
  if (name == "ground-pair") return {Complex(0), Complex(0)};
  if (name == "fig2") return {Complex(s5), Complex(2 * s5)};
  if (name == "phi-minus") return {Complex(s2), Complex(-s2)};
  if (name == "phi-plus") return {Complex(s2), Complex(s2)};
  throw std::invalid_argument("unknown initial state name: " + name);
}

InitialState named_initial_state(const std::string& name) {
  if (name == "ground-pair") return ground_state_pair();
  const auto [c1, c2] = named_amplitudes(name);
  InitialState state = single_excitation_state(c1, c2);
  state.description = name;
  return state;
}

}  // namespace qheom
