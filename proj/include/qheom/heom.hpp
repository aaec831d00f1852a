// heom.hpp — truncated hierarchy of auxiliary density operators and its integrator
#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qheom/bath.hpp"
#include "qheom/models.hpp"
#include "qheom/timeseries.hpp"

namespace qheom {

struct HierarchyIndex {
  int n1 = 0;
  int n2 = 0;
};

// Number of indices with n1 + n2 <= depth: (depth+1)(depth+2)/2.
int hierarchy_size(int depth);

// Canonical order: lexicographic by (n1 + n2, n1); (0,0) first.
std::vector<HierarchyIndex> enumerate_indices(int depth);

// Flat ladder of auxiliary density operators (ADOs) in canonical order.
// Block 0 is the physical density matrix; blocks with n != (0,0) are
// bookkeeping operators, not density matrices, and start at zero.
struct HierarchyState {
  int depth = 0;
  int dim = 0;
  double time = 0.0;
  Eigen::VectorXcd data;  // ado_count() blocks of dim*dim entries, column-major

  static HierarchyState from_density(const Matrix& rho0, int depth);
  static HierarchyState zero(int dim, int depth);

  int ado_count() const { return hierarchy_size(depth); }
  Eigen::Map<Matrix> ado(int i);
  Eigen::Map<const Matrix> ado(int i) const;
  Matrix physical() const;  // copy of block (0,0), unsymmetrized
};

struct SolverConfig {
  double dt = 0.01;        // RK4 step, units 1/omega0; must satisfy dt <= 0.1/omega0
  double t_end = 100.0;
  int sample_stride = 10;  // record every sample_stride steps
  int depth = 8;           // truncation tier (starting depth for converge)
  double convergence_tol = 1e-4;
};

// 8 for lambda <= 0.01, 12 for lambda <= 0.1, 16 beyond.
int default_depth(double lambda);

class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(std::size_t step, double t);
  std::size_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::size_t step_;
  double time_;
};

// Right-hand side of the hierarchy. Interior indices couple one tier up and
// one tier down; boundary indices (n1 + n2 = depth) drop the up-coupling and
// keep their own damping and down-coupling. Per-index outputs depend only on
// read-only neighbor blocks of the input, so evaluation is data-parallel
// across indices.
HierarchyState heom_derivative(const HierarchyState& state,
                               const ModelSpec& model,
                               const ExponentialDecomposition& decomp);

// Classic fourth-order Runge-Kutta on the full stacked ADO vector.
// Throws InstabilityError if the result is not finite.
HierarchyState rk4_step(const HierarchyState& state, double dt,
                        const ModelSpec& model,
                        const ExponentialDecomposition& decomp);

// Called at each sample with the raw (unsymmetrized) physical block.
using StateObserver = std::function<void(double t, const Matrix& rho_raw)>;
// Scalar extracted from the symmetrized physical block.
using ScalarObservable = std::function<double(const Matrix& rho)>;

struct EvolveResult {
  TimeSeries series;
  HierarchyState final_state;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;  // of the raw physical block
  double min_eigenvalue = 0.0;         // over all samples
};

// Integrates the hierarchy from a validated density matrix and samples the
// physical block every sample_stride steps. The block is symmetrized at
// sampling time only, never during stepping.
EvolveResult evolve(const Matrix& rho0, const ModelSpec& model,
                    const LorentzBath& bath, const SolverConfig& cfg,
                    const std::vector<StateObserver>& observers = {});

struct ConvergeResult {
  TimeSeries series;   // run at the converged depth
  int depth = 0;       // smallest depth whose depth+2 check passed
  double last_delta = 0.0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

// Raises the depth by 2 from cfg.depth until the sampled observable series
// changes by less than cfg.convergence_tol between consecutive depths.
// Default observable: unclamped concurrence for dim 4, excited population
// for dim 2. Throws when the depth would exceed max_depth.
ConvergeResult converge(const Matrix& rho0, const ModelSpec& model,
                        const LorentzBath& bath, const SolverConfig& cfg,
                        const ScalarObservable& observable = {},
                        int max_depth = 40);

}  // namespace qheom
