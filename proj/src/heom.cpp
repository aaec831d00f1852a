#include "qheom/heom.hpp"

#include <cmath>
#include <sstream>

#include "qheom/observables.hpp"

namespace qheom {

int hierarchy_size(int depth) { return (depth + 1) * (depth + 2) / 2; }

std::vector<HierarchyIndex> enumerate_indices(int depth) {
  if (depth < 0) {
    throw std::invalid_argument("enumerate_indices: depth must be >= 0");
  }
  std::vector<HierarchyIndex> indices;
  indices.reserve(static_cast<std::size_t>(hierarchy_size(depth)));
  for (int tier = 0; tier <= depth; ++tier) {
    for (int n1 = 0; n1 <= tier; ++n1) {
      indices.push_back({n1, tier - n1});
    }
  }
  return indices;
}

HierarchyState HierarchyState::zero(int dim, int depth) {
  if (dim < 1 || depth < 1) {
    throw std::invalid_argument("HierarchyState: dim and depth must be >= 1");
  }
  HierarchyState state;
  state.depth = depth;
  state.dim = dim;
  state.data = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(hierarchy_size(depth)) * dim * dim);
  return state;
}

HierarchyState HierarchyState::from_density(const Matrix& rho0, int depth) {
  validate_density_matrix(rho0);
  HierarchyState state = zero(static_cast<int>(rho0.rows()), depth);
  state.ado(0) = rho0;
  return state;
}

Eigen::Map<Matrix> HierarchyState::ado(int i) {
  return {data.data() + static_cast<std::ptrdiff_t>(i) * dim * dim, dim, dim};
}

Eigen::Map<const Matrix> HierarchyState::ado(int i) const {
  return {data.data() + static_cast<std::ptrdiff_t>(i) * dim * dim, dim, dim};
}

Matrix HierarchyState::physical() const { return ado(0); }

int default_depth(double lambda) {
  if (lambda <= 0.01) return 8;
  if (lambda <= 0.1) return 12;
  return 16;
}

InstabilityError::InstabilityError(std::size_t step, double t)
    : std::runtime_error("hierarchy integration produced non-finite values at step " +
                         std::to_string(step) + " (t = " + std::to_string(t) +
                         "); reduce dt or increase depth"),
      step_(step),
      time_(t) {}

namespace {

// Flattened index of (n1, n2): tier offset + n1.
inline int flat_index(int n1, int n2) {
  const int tier = n1 + n2;
  return tier * (tier + 1) / 2 + n1;
}

// Precomputed per-index couplings for one ladder geometry.
struct HierarchyTables {
  int depth = 0;
  std::vector<int> up1, up2, down1, down2;  // -1 when absent
  std::vector<double> n1, n2;
  std::vector<Complex> damping;  // n . nu

  HierarchyTables(int depth_in, const ExponentialDecomposition& decomp)
      : depth(depth_in) {
    const auto indices = enumerate_indices(depth);
    const int count = static_cast<int>(indices.size());
    up1.resize(count);
    up2.resize(count);
    down1.resize(count);
    down2.resize(count);
    n1.resize(count);
    n2.resize(count);
    damping.resize(count);
    for (int i = 0; i < count; ++i) {
      const auto [a, b] = indices[static_cast<std::size_t>(i)];
      const bool boundary = a + b == depth;
      up1[i] = boundary ? -1 : flat_index(a + 1, b);
      up2[i] = boundary ? -1 : flat_index(a, b + 1);
      down1[i] = a > 0 ? flat_index(a - 1, b) : -1;
      down2[i] = b > 0 ? flat_index(a, b - 1) : -1;
      n1[i] = a;
      n2[i] = b;
      damping[i] = static_cast<double>(a) * decomp.nu[0] +
                   static_cast<double>(b) * decomp.nu[1];
    }
  }
};

// Hierarchy right-hand side. Templated on the compile-time block size so the
// 2x2 and 4x4 cases run on fixed-size Eigen kernels; N = Dynamic is the
// general fallback. Each output block depends only on read-only blocks of
// `in`, so the loop body is safe to run in parallel across indices.
template <int N>
void derivative_kernel(const HierarchyTables& tables,
                       const Matrix& h_s, const Matrix& v,
                       const ExponentialDecomposition& decomp, int dim,
                       const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  using Block = Eigen::Matrix<Complex, N, N>;
  using MapC = Eigen::Map<const Block>;
  using MapM = Eigen::Map<Block>;
  const Block h = h_s;
  const Block vv = v;
  const Complex im(0.0, 1.0);
  // -i n_k (cR_k [V, x] + i cI_k {V, x}) expands to
  // (-i cR_k n_k)(Vx - xV) + (cI_k n_k)(Vx + xV)
  const Complex coeff_comm[2] = {-im * decomp.real_coeffs[0],
                                 -im * decomp.real_coeffs[1]};
  const Complex coeff_anti[2] = {decomp.imag_coeffs[0], decomp.imag_coeffs[1]};

  const int count = static_cast<int>(tables.damping.size());
  const std::ptrdiff_t block_size = static_cast<std::ptrdiff_t>(dim) * dim;
  const Complex* src = in.data();
  Complex* dst = out.data();

  for (int i = 0; i < count; ++i) {
    MapC x(src + i * block_size, dim, dim);
    MapM d(dst + i * block_size, dim, dim);
    Block p = h * x;
    Block q = x * h;
    d = -im * (p - q) - tables.damping[static_cast<std::size_t>(i)] * x;

    if (tables.up1[static_cast<std::size_t>(i)] >= 0) {
      MapC u1(src + tables.up1[static_cast<std::size_t>(i)] * block_size, dim, dim);
      MapC u2(src + tables.up2[static_cast<std::size_t>(i)] * block_size, dim, dim);
      p.noalias() = vv * u1;
      q.noalias() = u1 * vv;
      d += -im * (p - q);
      p.noalias() = vv * u2;
      q.noalias() = u2 * vv;
      d += -im * (p - q);
    }

    const int dn[2] = {tables.down1[static_cast<std::size_t>(i)],
                       tables.down2[static_cast<std::size_t>(i)]};
    const double nk[2] = {tables.n1[static_cast<std::size_t>(i)],
                          tables.n2[static_cast<std::size_t>(i)]};
    for (int k = 0; k < 2; ++k) {
      if (dn[k] < 0) continue;
      MapC y(src + dn[k] * block_size, dim, dim);
      p.noalias() = vv * y;
      q.noalias() = y * vv;
      d += (nk[k] * coeff_comm[k]) * (p - q) + (nk[k] * coeff_anti[k]) * (p + q);
    }
  }
}

class HeomEngine {
 public:
  HeomEngine(const ModelSpec& model, const ExponentialDecomposition& decomp,
             int depth)
      : model_(model),
        decomp_(decomp),
        tables_(depth, decomp),
        dim_(model.dim),
        total_(static_cast<Eigen::Index>(hierarchy_size(depth)) * model.dim *
               model.dim) {
    validate(model);
    k1_.resize(total_);
    k2_.resize(total_);
    k3_.resize(total_);
    k4_.resize(total_);
    stage_.resize(total_);
  }

  void derivative(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    switch (dim_) {
      case 2:
        derivative_kernel<2>(tables_, model_.h_s, model_.v, decomp_, dim_, in, out);
        break;
      case 4:
        derivative_kernel<4>(tables_, model_.h_s, model_.v, decomp_, dim_, in, out);
        break;
      default:
        derivative_kernel<Eigen::Dynamic>(tables_, model_.h_s, model_.v,
                                          decomp_, dim_, in, out);
        break;
    }
  }

  void step(Eigen::VectorXcd& y, double dt) {
    derivative(y, k1_);
    stage_ = y + (dt / 2) * k1_;
    derivative(stage_, k2_);
    stage_ = y + (dt / 2) * k2_;
    derivative(stage_, k3_);
    stage_ = y + dt * k3_;
    derivative(stage_, k4_);
    y += (dt / 6) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  ModelSpec model_;
  ExponentialDecomposition decomp_;
  HierarchyTables tables_;
  int dim_;
  Eigen::Index total_;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, stage_;
};

void check_state_model(const HierarchyState& state, const ModelSpec& model) {
  if (state.dim != model.dim) {
    throw std::invalid_argument("hierarchy state and model dimensions differ");
  }
  if (state.data.size() !=
      static_cast<Eigen::Index>(hierarchy_size(state.depth)) * state.dim *
          state.dim) {
    throw std::invalid_argument("hierarchy state storage is malformed");
  }
}

double max_nu_magnitude(const ExponentialDecomposition& decomp) {
  return std::max(std::abs(decomp.nu[0]), std::abs(decomp.nu[1]));
}

ScalarObservable default_observable(int dim) {
  if (dim == 4) {
    return [](const Matrix& rho) { return concurrence_raw(rho); };
  }
  return [](const Matrix& rho) { return rho(0, 0).real(); };
}

}  // namespace

HierarchyState heom_derivative(const HierarchyState& state,
                               const ModelSpec& model,
                               const ExponentialDecomposition& decomp) {
  check_state_model(state, model);
  HeomEngine engine(model, decomp, state.depth);
  HierarchyState result = HierarchyState::zero(state.dim, state.depth);
  result.time = state.time;
  engine.derivative(state.data, result.data);
  return result;
}

HierarchyState rk4_step(const HierarchyState& state, double dt,
                        const ModelSpec& model,
                        const ExponentialDecomposition& decomp) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rk4_step: dt must be > 0");
  }
  check_state_model(state, model);
  HeomEngine engine(model, decomp, state.depth);
  HierarchyState result = state;
  engine.step(result.data, dt);
  result.time = state.time + dt;
  if (!result.data.allFinite()) {
    throw InstabilityError(1, result.time);
  }
  return result;
}

EvolveResult evolve(const Matrix& rho0, const ModelSpec& model,
                    const LorentzBath& bath, const SolverConfig& cfg,
                    const std::vector<StateObserver>& observers) {
  validate(model);
  validate(bath);
  validate_density_matrix(rho0);
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) {
    throw std::invalid_argument("SolverConfig: dt and t_end must be > 0");
  }
  if (cfg.dt > 0.1 / bath.omega0) {
    throw std::invalid_argument("SolverConfig: dt must be <= 0.1/omega0");
  }
  if (cfg.sample_stride < 1) {
    throw std::invalid_argument("SolverConfig: sample_stride must be >= 1");
  }
  if (cfg.depth < 1) {
    throw std::invalid_argument("SolverConfig: depth must be >= 1");
  }
  const auto decomp = decompose(bath);
  // Stability guard for the fixed-step integrator: the stiffest hierarchy
  // damping is ~ depth * |nu|.
  if (cfg.dt * cfg.depth * max_nu_magnitude(decomp) >= 0.5) {
    throw std::invalid_argument(
        "SolverConfig: dt too large for this depth (dt * depth * |nu| must "
        "stay below 0.5)");
  }

  HierarchyState state = HierarchyState::from_density(rho0, cfg.depth);
  HeomEngine engine(model, decomp, cfg.depth);

  const auto total_steps = static_cast<std::size_t>(
      std::llround(std::ceil(cfg.t_end / cfg.dt - 1e-9)));

  EvolveResult result;
  result.min_eigenvalue = std::numeric_limits<double>::infinity();

  const int dim = model.dim;
  auto sample = [&](std::size_t step) {
    const double t = static_cast<double>(step) * cfg.dt;
    const Matrix raw = state.ado(0);
    // the exact flow preserves the trace and hermiticity to roundoff, so a
    // macroscopic violation means the integration has diverged even if the
    // entries are still finite
    const double herm_error = ops::hermiticity_error(raw);
    if (!raw.allFinite() || std::abs(raw.trace() - Complex(1.0)) > 1e-6 ||
        herm_error > 1e-3) {
      throw InstabilityError(step, t);
    }
    for (const auto& observer : observers) observer(t, raw);
    const Matrix sym = ops::hermitize(raw);
    ObservableRecord record = diagnostics(sym);
    record.t = t;
    if (dim == 4) {
      record.concurrence_raw = concurrence_raw(sym);
      record.concurrence = std::max(0.0, record.concurrence_raw);
    }
    result.max_trace_error = std::max(result.max_trace_error, record.trace_error);
    result.max_hermiticity_error =
        std::max(result.max_hermiticity_error, herm_error);
    result.min_eigenvalue = std::min(result.min_eigenvalue, record.min_eigenvalue);
    result.series.rows.push_back(record);
  };

  sample(0);
  for (std::size_t step = 1; step <= total_steps; ++step) {
    engine.step(state.data, cfg.dt);
    state.time = static_cast<double>(step) * cfg.dt;
    if (step % static_cast<std::size_t>(cfg.sample_stride) == 0 ||
        step == total_steps) {
      sample(step);
    }
  }

  result.final_state = std::move(state);
  return result;
}

ConvergeResult converge(const Matrix& rho0, const ModelSpec& model,
                        const LorentzBath& bath, const SolverConfig& cfg,
                        const ScalarObservable& observable, int max_depth) {
  if (!(cfg.convergence_tol > 0.0)) {
    throw std::invalid_argument("converge: convergence_tol must be > 0");
  }
  const ScalarObservable obs =
      observable ? observable : default_observable(model.dim);

  auto run = [&](int depth) {
    SolverConfig run_cfg = cfg;
    run_cfg.depth = depth;
    std::vector<double> values;
    std::vector<StateObserver> observers{
        [&](double, const Matrix& raw) { values.push_back(obs(ops::hermitize(raw))); }};
    EvolveResult r = evolve(rho0, model, bath, run_cfg, observers);
    return std::pair{std::move(r), std::move(values)};
  };

  auto [current, current_values] = run(cfg.depth);
  int depth = cfg.depth;
  double delta = std::numeric_limits<double>::infinity();
  while (true) {
    if (depth + 2 > max_depth) {
      std::ostringstream msg;
      msg << "converge: depth cap " << max_depth
          << " reached without convergence (last delta " << delta << ")";
      throw std::runtime_error(msg.str());
    }
    auto [next, next_values] = run(depth + 2);
    delta = 0.0;
    for (std::size_t i = 0; i < current_values.size(); ++i) {
      delta = std::max(delta, std::abs(current_values[i] - next_values[i]));
    }
    if (delta < cfg.convergence_tol) {
      ConvergeResult result;
      result.series = std::move(current.series);
      result.depth = depth;
      result.last_delta = delta;
      result.max_trace_error = current.max_trace_error;
      result.max_hermiticity_error = current.max_hermiticity_error;
      result.min_eigenvalue = current.min_eigenvalue;
      return result;
    }
    current = std::move(next);
    current_values = std::move(next_values);
    depth += 2;
  }
}

}  // namespace qheom
