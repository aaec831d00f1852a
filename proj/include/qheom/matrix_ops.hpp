// matrix_ops.hpp — dense complex-matrix algebra and superoperator vocabulary
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qheom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

namespace ops {

// Pauli matrices in the basis {|excited>, |ground>}; sigma_z|excited> = +|excited>.
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix identity(int dim);

Matrix commutator(const Matrix& a, const Matrix& b);      // [A,B] = AB - BA
Matrix anticommutator(const Matrix& a, const Matrix& b);  // {A,B} = AB + BA
Matrix kron(const Matrix& a, const Matrix& b);

double hermiticity_error(const Matrix& m);  // max elementwise |M - M^dag|
bool is_hermitian(const Matrix& m, double tol);
Matrix hermitize(const Matrix& m);  // (M + M^dag)/2

// Real eigenvalues in descending order. Input must be Hermitian within 1e-10;
// callers with integrator drift should hermitize() first.
std::vector<double> hermitian_eigenvalues(const Matrix& m);

// Trace over the second tensor factor of a (dim_a*dim_b)-dimensional matrix.
Matrix partial_trace_second(const Matrix& m, int dim_a, int dim_b);

}  // namespace ops
}  // namespace qheom
