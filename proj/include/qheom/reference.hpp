// reference.hpp — independent solvers: RWA single-excitation dynamics and the
// single-mode Fock-space oracle
#pragma once

#include <vector>

#include "qheom/bath.hpp"
#include "qheom/models.hpp"

namespace qheom {

// Interaction-picture amplitudes of c1 |10> + c2 |01> under the collective
// rotating-wave coupling at resonance.
struct RwaAmplitudes {
  std::vector<double> t;
  std::vector<Complex> c1;
  std::vector<Complex> c2;
};

// Solves the memory-kernel dynamics for an exponential kernel as the
// equivalent local system
//   c1' = c2' = -z,   z' = -gamma z + lambda (c1 + c2),   z(0) = 0,
// with RK4 on the given grid. Input must be normalized; the all-zero
// amplitude pair (ground pair) is accepted and stays constant.
RwaAmplitudes rwa_evolve(Complex c1_0, Complex c2_0, const LorentzBath& bath,
                         const std::vector<double>& t_grid);

// The single-excitation 4x4 density matrix: middle block from (c1, c2),
// ground population 1 - |c1|^2 - |c2|^2, no double excitation.
Matrix rwa_density(Complex c1, Complex c2);

double rwa_concurrence(Complex c1, Complex c2);  // 2 |c1 c2*|

// |<phi_-|psi(0)>|^2 with phi_- = (|01> - |10>)/sqrt(2); equals the long-time
// concurrence of rwa_evolve for any gamma > 0.
double rwa_steady_concurrence(Complex c1_0, Complex c2_0);

struct FockOracleConfig {
  int n_fock = 8;          // starting photon cutoff; doubled until converged
  double dt = 0.002;       // RK4 step for the composite Schroedinger equation
  double t_end = 50.0;
  int sample_stride = 50;
  double omega0 = 1.0;     // mode frequency
  int n_fock_cap = 256;
};

struct OracleSeries {
  std::vector<double> t;
  std::vector<Matrix> rho;  // reduced system state at each sample
  int n_fock = 0;           // cutoff actually used
  double max_top_population = 0.0;  // highest Fock level, over all samples
  double max_norm_drift = 0.0;      // |<psi|psi> - 1|
  double max_energy_drift = 0.0;    // |<H> - <H>_0|
};

// Closed evolution of H_S + omega0 b^dag b + sqrt(lambda) V (b + b^dag) on
// system x Fock(<= n_fock) from the vacuum, partial-traced over the field.
// The cutoff is doubled until the top-level population stays below 1e-8.
// Mixed rho0 is handled by evolving its eigenvector branches.
OracleSeries single_mode_oracle(const ModelSpec& model, double lambda,
                                const InitialState& rho0,
                                const FockOracleConfig& cfg);

}  // namespace qheom
