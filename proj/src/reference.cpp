#include "qheom/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace qheom {

namespace {

// (c1, c2, z) stacked; the kernel memory variable z obeys
// z' = -gamma z + lambda (c1 + c2).
using RwaVec = Eigen::Vector3cd;

RwaVec rwa_rhs(const RwaVec& y, double lambda, double gamma) {
  RwaVec d;
  d(0) = -y(2);
  d(1) = -y(2);
  d(2) = -gamma * y(2) + lambda * (y(0) + y(1));
  return d;
}

void rwa_rk4_step(RwaVec& y, double dt, double lambda, double gamma) {
  const RwaVec k1 = rwa_rhs(y, lambda, gamma);
  const RwaVec k2 = rwa_rhs(y + (dt / 2) * k1, lambda, gamma);
  const RwaVec k3 = rwa_rhs(y + (dt / 2) * k2, lambda, gamma);
  const RwaVec k4 = rwa_rhs(y + dt * k3, lambda, gamma);
  y += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

RwaAmplitudes rwa_evolve(Complex c1_0, Complex c2_0, const LorentzBath& bath,
                         const std::vector<double>& t_grid) {
  validate(bath);
  const double norm2 = std::norm(c1_0) + std::norm(c2_0);
  const bool vacuum = norm2 < 1e-12;
  if (!vacuum && std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("rwa_evolve: amplitudes not normalized");
  }
  if (t_grid.empty() || t_grid.front() < 0.0) {
    throw std::invalid_argument("rwa_evolve: bad time grid");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] <= t_grid[i - 1]) {
      throw std::invalid_argument("rwa_evolve: time grid must increase");
    }
  }

  RwaAmplitudes out;
  out.t = t_grid;
  out.c1.reserve(t_grid.size());
  out.c2.reserve(t_grid.size());

  const double dt_max = 0.01;
  RwaVec y(c1_0, c2_0, Complex(0.0));
  double t = 0.0;
  for (double t_target : t_grid) {
    const double span = t_target - t;
    if (span > 0.0) {
      const int substeps = std::max(1, static_cast<int>(std::ceil(span / dt_max - 1e-12)));
      const double dt = span / substeps;
      for (int s = 0; s < substeps; ++s) {
        rwa_rk4_step(y, dt, bath.lambda, bath.gamma);
      }
      t = t_target;
    }
    out.c1.push_back(y(0));
    out.c2.push_back(y(1));
  }
  return out;
}

Matrix rwa_density(Complex c1, Complex c2) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (norm2 > 1.0 + 1e-9) {
    throw std::invalid_argument("rwa_density: amplitudes exceed unit norm");
  }
  Matrix rho = Matrix::Zero(4, 4);
  rho(1, 1) = std::norm(c1);
  rho(1, 2) = c1 * std::conj(c2);
  rho(2, 1) = c2 * std::conj(c1);
  rho(2, 2) = std::norm(c2);
  rho(3, 3) = 1.0 - norm2;
  return rho;
}

double rwa_concurrence(Complex c1, Complex c2) {
  return 2.0 * std::abs(c1 * std::conj(c2));
}

double rwa_steady_concurrence(Complex c1_0, Complex c2_0) {
  const double norm2 = std::norm(c1_0) + std::norm(c2_0);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument(
        "rwa_steady_concurrence: amplitudes not normalized");
  }
  // overlap with phi_- = (|01> - |10>)/sqrt(2): (c2 - c1)/sqrt(2)
  return 0.5 * std::norm(c2_0 - c1_0);
}

namespace {

struct FockOperators {
  Matrix hamiltonian;      // shifted by -<H>_0 during integration
  Matrix hamiltonian_raw;  // unshifted, for energy bookkeeping
  int dim_s = 0;
  int levels = 0;  // n_fock + 1
};

FockOperators build_composite(const ModelSpec& model, double lambda,
                              double omega0, int n_fock) {
  const int levels = n_fock + 1;
  Matrix number = Matrix::Zero(levels, levels);
  Matrix position = Matrix::Zero(levels, levels);  // b + b^dag
  for (int n = 0; n < levels; ++n) {
    number(n, n) = n;
    if (n + 1 < levels) {
      position(n, n + 1) = std::sqrt(n + 1.0);
      position(n + 1, n) = std::sqrt(n + 1.0);
    }
  }
  FockOperators op;
  op.dim_s = model.dim;
  op.levels = levels;
  op.hamiltonian_raw =
      ops::kron(model.h_s, ops::identity(levels)) +
      omega0 * ops::kron(ops::identity(model.dim), number) +
      std::sqrt(lambda) * ops::kron(model.v, position);
  return op;
}

void schroedinger_rk4_step(const Matrix& h, Eigen::VectorXcd& psi, double dt,
                           Eigen::VectorXcd& k1, Eigen::VectorXcd& k2,
                           Eigen::VectorXcd& k3, Eigen::VectorXcd& k4,
                           Eigen::VectorXcd& tmp) {
  const Complex im(0.0, 1.0);
  k1.noalias() = -im * (h * psi);
  tmp = psi + (dt / 2) * k1;
  k2.noalias() = -im * (h * tmp);
  tmp = psi + (dt / 2) * k2;
  k3.noalias() = -im * (h * tmp);
  tmp = psi + dt * k3;
  k4.noalias() = -im * (h * tmp);
  psi += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

OracleSeries single_mode_oracle(const ModelSpec& model, double lambda,
                                const InitialState& rho0,
                                const FockOracleConfig& cfg) {
  validate(model);
  validate_density_matrix(rho0.rho0);
  if (rho0.rho0.rows() != model.dim) {
    throw std::invalid_argument("single_mode_oracle: state/model dimension mismatch");
  }
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("single_mode_oracle: lambda must be >= 0");
  }
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || cfg.sample_stride < 1 ||
      cfg.n_fock < 2) {
    throw std::invalid_argument("single_mode_oracle: bad config");
  }

  // Branch decomposition of the (possibly mixed) initial system state.
  Eigen::SelfAdjointEigenSolver<Matrix> init(ops::hermitize(rho0.rho0));
  std::vector<std::pair<double, Eigen::VectorXcd>> branches;
  for (int i = 0; i < model.dim; ++i) {
    const double weight = init.eigenvalues()(i);
    if (weight > 1e-14) {
      branches.emplace_back(weight, init.eigenvectors().col(i));
    }
  }

  const auto total_steps = static_cast<std::size_t>(
      std::llround(std::ceil(cfg.t_end / cfg.dt - 1e-9)));

  for (int n_fock = cfg.n_fock;; n_fock *= 2) {
    if (n_fock > cfg.n_fock_cap) {
      throw std::runtime_error(
          "single_mode_oracle: photon cutoff cap exceeded without "
          "convergence of the top-level population");
    }
    FockOperators op = build_composite(model, lambda, cfg.omega0, n_fock);
    const int dim_full = op.dim_s * op.levels;

    OracleSeries series;
    series.n_fock = n_fock;
    std::size_t n_samples = 0;
    for (std::size_t step = 0; step <= total_steps; ++step) {
      if (step % static_cast<std::size_t>(cfg.sample_stride) == 0 ||
          step == total_steps) {
        ++n_samples;
      }
    }
    series.t.reserve(n_samples);
    series.rho.assign(n_samples, Matrix::Zero(model.dim, model.dim));

    bool first_branch = true;
    for (const auto& [weight, sys_vec] : branches) {
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_full);
      for (int s = 0; s < op.dim_s; ++s) {
        psi(static_cast<Eigen::Index>(s) * op.levels) = sys_vec(s);  // vacuum field
      }
      const double energy0 = (psi.adjoint() * op.hamiltonian_raw * psi)(0).real();
      // Evolving with H - <H> I leaves the reduced state unchanged and keeps
      // the dominant phases small for the fixed-step integrator.
      const Matrix h = op.hamiltonian_raw -
                       energy0 * Matrix::Identity(dim_full, dim_full);

      Eigen::VectorXcd k1(dim_full), k2(dim_full), k3(dim_full), k4(dim_full),
          tmp(dim_full);
      std::size_t sample_at = 0;
      auto record = [&](std::size_t step) {
        const double t = static_cast<double>(step) * cfg.dt;
        if (first_branch) series.t.push_back(t);
        // accumulate weighted reduced state
        Matrix full = psi * psi.adjoint();
        series.rho[sample_at] +=
            weight * ops::partial_trace_second(full, op.dim_s, op.levels);
        // diagnostics
        double top = 0.0;
        for (int s = 0; s < op.dim_s; ++s) {
          top += std::norm(psi(static_cast<Eigen::Index>(s) * op.levels +
                               op.levels - 1));
        }
        series.max_top_population = std::max(series.max_top_population, top);
        series.max_norm_drift = std::max(series.max_norm_drift,
                                         std::abs(psi.squaredNorm() - 1.0));
        const double energy =
            (psi.adjoint() * op.hamiltonian_raw * psi)(0).real();
        series.max_energy_drift =
            std::max(series.max_energy_drift, std::abs(energy - energy0));
        ++sample_at;
      };

      record(0);
      for (std::size_t step = 1; step <= total_steps; ++step) {
        schroedinger_rk4_step(h, psi, cfg.dt, k1, k2, k3, k4, tmp);
        if (step % static_cast<std::size_t>(cfg.sample_stride) == 0 ||
            step == total_steps) {
          record(step);
        }
      }
      first_branch = false;
    }

    if (series.max_top_population < 1e-8) {
      return series;
    }
  }
}

}  // namespace qheom
