// models.hpp — system Hamiltonians, coupling operators, and canonical initial states
#pragma once

#include <string>
#include <utility>

#include "qheom/matrix_ops.hpp"

namespace qheom {

struct ModelSpec {
  int dim = 0;
  Matrix h_s;  // system Hamiltonian, units omega0
  Matrix v;    // bath-coupling operator, dimensionless
  std::string label;
};

void validate(const ModelSpec& model);  // Hermitian within 1e-12, dims consistent

struct InitialState {
  Matrix rho0;
  std::string description;
};

// Hermitian within herm_tol, trace 1 within trace_tol, eigenvalues >= -eig_tol.
void validate_density_matrix(const Matrix& rho, double herm_tol = 1e-12,
                             double trace_tol = 1e-12, double eig_tol = 1e-10);

// Two-qubit basis order is fixed globally: |11>, |10>, |01>, |00>
// (tensor order qubit1 x qubit2, excited state first per qubit).
// H_S = (w1/2) sz x I + (w2/2) I x sz,  V = a1 sx x I + a2 I x sx.
ModelSpec two_qubit_common_bath(double w1, double w2, double a1, double a2);

// dim 2, H_S = (w/2) sz, V = sx.
ModelSpec single_qubit(double w);

// Pure state c1 |1>_1 |0>_2 + c2 |0>_1 |1>_2; requires |c1|^2 + |c2|^2 = 1.
InitialState single_excitation_state(Complex c1, Complex c2);

InitialState ground_state_pair();  // |00><00|

// Names: "ground-pair", "fig2" ((1,2)/sqrt5), "phi-minus", "phi-plus".
InitialState named_initial_state(const std::string& name);

// Single-excitation amplitudes for a named state; (0,0) for ground-pair.
std::pair<Complex, Complex> named_amplitudes(const std::string& name);

}  // namespace qheom
