// acceptance.cpp — end-to-end criteria for the simulator, one pass/fail line
// each. Returns the number of failed criteria.
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "qheom/heom.hpp"
#include "qheom/observables.hpp"
#include "qheom/reference.hpp"
#include "qheom/runner.hpp"

using namespace qheom;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << detail << std::endl;
  if (!pass) ++failures;
}

std::string num(double value) {
  std::ostringstream out;
  out << std::setprecision(3) << value;
  return out.str();
}

// A depth-converged hierarchy run plus every validity figure the suite needs.
struct ValidatedRun {
  std::string label;
  TimeSeries series;
  int depth = 0;
  double depth_delta = 0.0;
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double dt_half_delta = 0.0;
};

ValidatedRun validated_heom_run(const std::string& label, const Matrix& rho0,
                                const ModelSpec& model, const LorentzBath& bath,
                                const SolverConfig& cfg, int max_depth = 40) {
  ValidatedRun run;
  run.label = label;
  ConvergeResult conv = converge(rho0, model, bath, cfg, {}, max_depth);
  run.depth = conv.depth;
  run.depth_delta = conv.last_delta;
  run.max_trace_error = conv.max_trace_error;
  run.max_hermiticity_error = conv.max_hermiticity_error;
  run.min_eigenvalue = conv.min_eigenvalue;

  SolverConfig half = cfg;
  half.depth = conv.depth;
  half.dt = cfg.dt / 2;
  half.sample_stride = cfg.sample_stride * 2;
  const EvolveResult refined = evolve(rho0, model, bath, half);
  double delta = 0.0;
  const std::size_t n =
      std::min(refined.series.rows.size(), conv.series.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    delta = std::max(delta, std::abs(refined.series.rows[i].concurrence_raw -
                                     conv.series.rows[i].concurrence_raw));
  }
  run.dt_half_delta = delta;
  run.series = std::move(conv.series);
  return run;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelSpec model = two_qubit_common_bath(1.0, 1.0, 1.0, 1.0);
  const double s5 = 1.0 / std::sqrt(5.0);
  const double s2 = 1.0 / std::sqrt(2.0);

  std::vector<const ValidatedRun*> validity_runs;

  // ---- criterion 1: single-mode oracle equivalence ------------------------
  SolverConfig cfg1;
  cfg1.dt = 0.01;
  cfg1.t_end = 50.0;
  cfg1.sample_stride = 10;
  cfg1.depth = 12;
  cfg1.convergence_tol = 1e-4;
  const LorentzBath bath1{0.1, 0.0, 1.0};
  const ValidatedRun run1 = validated_heom_run(
      "lambda=0.1 gamma=0 ground-pair", ground_state_pair().rho0, model, bath1,
      cfg1);
  validity_runs.push_back(&run1);

  FockOracleConfig ocfg1;
  ocfg1.n_fock = 8;
  ocfg1.dt = 0.002;
  ocfg1.t_end = 50.0;
  ocfg1.sample_stride = 50;
  const OracleSeries oracle1 =
      single_mode_oracle(model, 0.1, ground_state_pair(), ocfg1);

  {
    bool aligned = oracle1.t.size() == run1.series.rows.size();
    double worst = 0.0;
    if (aligned) {
      for (std::size_t k = 0; k < oracle1.t.size(); ++k) {
        const double oracle_c = concurrence(ops::hermitize(oracle1.rho[k]));
        worst = std::max(
            worst, std::abs(run1.series.rows[k].concurrence - oracle_c));
      }
    }
    report(1, aligned && worst <= 1e-3,
           "heom vs single-mode oracle, lambda=0.1, gamma=0, t<=50: max "
           "|dC| = " + num(worst) + " (tol 1e-3; depth " +
           std::to_string(run1.depth) + ", n_fock " +
           std::to_string(oracle1.n_fock) + ", " + num(elapsed_seconds(t0)) +
           " s)");
  }

  // ---- criterion 2: RWA steady value ---------------------------------------
  {
    const double exact = rwa_steady_concurrence(s5, 2 * s5);
    const bool exact_ok = std::abs(exact - 0.1) <= 1e-12;
    double worst = 0.0;
    for (double gamma : {0.01, 0.05, 0.1}) {
      for (double lambda : {1e-3, 1e-2}) {
        const LorentzBath bath{lambda, gamma, 1.0};
        const auto amps =
            rwa_evolve(s5, 2 * s5, bath, {25.0 / gamma, 50.0 / gamma});
        worst = std::max(
            worst,
            std::abs(rwa_concurrence(amps.c1.back(), amps.c2.back()) - 0.1));
      }
    }
    report(2, exact_ok && worst <= 1e-4,
           "steady concurrence of (1,2)/sqrt(5): analytic value " + num(exact) +
               ", long-time rwa deviation " + num(worst) + " (tol 1e-4)");
  }

  // ---- criterion 3: entanglement death and revival -------------------------
  {
    double t_alive = -1.0, t_dead = -1.0, t_revived = -1.0;
    for (const auto& row : run1.series.rows) {
      if (t_alive < 0.0) {
        if (row.concurrence > 0.05) t_alive = row.t;
      } else if (t_dead < 0.0) {
        if (row.concurrence < 1e-3) t_dead = row.t;
      } else if (t_revived < 0.0) {
        if (row.concurrence > 0.05) t_revived = row.t;
      }
    }
    const bool pass = t_revived > 0.0;
    report(3, pass,
           pass ? "death and revival on the criterion-1 run: C(" +
                      num(t_alive) + ") > 0.05, C(" + num(t_dead) +
                      ") < 1e-3, C(" + num(t_revived) + ") > 0.05"
                : "no death-and-revival pattern found in the criterion-1 run");
  }

  // ---- criterion 4: steady-state suppression and critical gamma ------------
  const std::vector<double> gammas{0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<ValidatedRun> sweep_runs(gammas.size());
  std::vector<double> steadies(gammas.size());
  std::vector<bool> settled(gammas.size());
  {
    const Matrix fig2 = named_initial_state("fig2").rho0;
    auto run_gamma = [&](std::size_t i) {
      const double gamma = gammas[i];
      SolverConfig cfg;
      cfg.dt = 0.01;
      cfg.t_end = std::max(600.0, std::ceil(20.0 / gamma));
      cfg.sample_stride = 20;
      cfg.depth = 8;
      cfg.convergence_tol = 1e-4;
      const LorentzBath bath{0.01, gamma, 1.0};
      sweep_runs[i] = validated_heom_run(
          "lambda=0.01 gamma=" + num(gamma) + " fig2", fig2, model, bath, cfg);
      const auto steady =
          steady_state_extract(sweep_runs[i].series, cfg.t_end / 6.0, 2e-3);
      settled[i] = steady.has_value();
      steadies[i] = steady.value_or(
          sweep_runs[i].series.rows.back().concurrence);
    };
    std::vector<std::future<void>> futures;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      futures.push_back(std::async(std::launch::async, run_gamma, i));
    }
    for (auto& f : futures) f.get();
    for (const auto& run : sweep_runs) validity_runs.push_back(&run);

    bool all_settled = true;
    bool non_increasing = true;
    bool suppressed = true;
    double floor_value = 1.0;
    std::ostringstream values;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      all_settled = all_settled && settled[i];
      if (i > 0 && steadies[i] > steadies[i - 1] + 5e-3) non_increasing = false;
      if (gammas[i] >= 0.01 && !(steadies[i] < 0.1 - 5e-3)) suppressed = false;
      floor_value = std::min(floor_value, steadies[i]);
      values << (i ? " " : "") << num(gammas[i]) << ":" << num(steadies[i]);
    }
    const bool floor_reached = floor_value <= 1e-4;
    report(4,
           all_settled && non_increasing && suppressed && floor_reached,
           "steady concurrence over the gamma grid [" + values.str() +
               "]: settled=" + std::to_string(all_settled) +
               " non-increasing=" + std::to_string(non_increasing) +
               " below-rwa=" + std::to_string(suppressed) +
               " floor=" + num(floor_value) + " (" +
               num(elapsed_seconds(t0)) + " s)");
  }

  // ---- criterion 5: weak-coupling RWA recovery ------------------------------
  SolverConfig cfg5;
  cfg5.dt = 0.01;
  cfg5.t_end = 20.0;
  cfg5.sample_stride = 10;
  cfg5.depth = 8;
  cfg5.convergence_tol = 1e-4;
  const LorentzBath bath5{1e-6, 0.05, 1.0};
  const ValidatedRun run5 =
      validated_heom_run("lambda=1e-6 gamma=0.05 fig2",
                         named_initial_state("fig2").rho0, model, bath5, cfg5);
  validity_runs.push_back(&run5);
  {
    std::vector<double> grid;
    grid.reserve(run5.series.rows.size() - 1);
    for (std::size_t i = 1; i < run5.series.rows.size(); ++i) {
      grid.push_back(run5.series.rows[i].t);
    }
    const auto amps = rwa_evolve(s5, 2 * s5, bath5, grid);
    double worst =
        std::abs(run5.series.rows[0].concurrence - rwa_concurrence(s5, 2 * s5));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      worst = std::max(worst,
                       std::abs(run5.series.rows[k + 1].concurrence -
                                rwa_concurrence(amps.c1[k], amps.c2[k])));
    }
    report(5, worst <= 1e-3,
           "heom vs rwa at lambda=1e-6, gamma=0.05, t<=20: max |dC| = " +
               num(worst) + " (tol 1e-3)");
  }

  // ---- criterion 6: validity suite over the converged runs -----------------
  {
    bool pass = true;
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0,
           worst_depth_delta = 0.0, worst_dt_delta = 0.0;
    for (const ValidatedRun* run : validity_runs) {
      worst_trace = std::max(worst_trace, run->max_trace_error);
      worst_herm = std::max(worst_herm, run->max_hermiticity_error);
      worst_eig = std::min(worst_eig, run->min_eigenvalue);
      worst_depth_delta = std::max(worst_depth_delta, run->depth_delta);
      worst_dt_delta = std::max(worst_dt_delta, run->dt_half_delta);
      const bool run_ok = run->max_trace_error <= 1e-8 &&
                          run->max_hermiticity_error <= 1e-8 &&
                          run->min_eigenvalue >= -1e-6 &&
                          run->depth_delta < 1e-4 &&
                          run->dt_half_delta < 1e-5;
      if (!run_ok) {
        pass = false;
        std::cout << "         validity violated on run [" << run->label
                  << "]\n";
      }
    }
    report(6, pass,
           "over " + std::to_string(validity_runs.size()) +
               " converged runs: trace " + num(worst_trace) + " (<=1e-8), "
               "hermiticity " + num(worst_herm) + " (<=1e-8), min eigenvalue " +
               num(worst_eig) + " (>=-1e-6), depth delta " +
               num(worst_depth_delta) + " (<1e-4), dt-halving delta " +
               num(worst_dt_delta) + " (<1e-5)");
  }

  // ---- criterion 7: decoherence-free subspace -------------------------------
  {
    std::vector<double> grid;
    for (double t = 0.5; t <= 100.0001; t += 0.5) grid.push_back(t);
    const LorentzBath bath7{0.01, 0.05, 1.0};
    const auto amps = rwa_evolve(s2, -s2, bath7, grid);
    double rwa_departure = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      rwa_departure = std::max(
          rwa_departure,
          std::abs(rwa_concurrence(amps.c1[k], amps.c2[k]) - 1.0));
    }
    const bool rwa_ok = rwa_departure <= 1e-8;

    SolverConfig cfg7;
    cfg7.dt = 0.01;
    cfg7.t_end = 200.0;
    cfg7.sample_stride = 20;
    cfg7.depth = 8;
    cfg7.convergence_tol = 1e-4;
    const ConvergeResult heom7 =
        converge(named_initial_state("phi-minus").rho0, model, bath7, cfg7);
    double heom_departure = 0.0;
    for (const auto& row : heom7.series.rows) {
      heom_departure =
          std::max(heom_departure, std::abs(row.concurrence - 1.0));
    }
    const bool heom_departed = heom_departure > 1e-3;
    report(7, rwa_ok && heom_departed,
           "phi-minus: rwa departure " + num(rwa_departure) +
               " (tol 1e-8); heom departure " + num(heom_departure) +
               " (required > 1e-3, lambda=0.01, gamma=0.05, t<=200)");
  }

  // ---- criterion 8: bath module exactness -----------------------------------
  {
    double worst_reconstruction = 0.0;
    for (const LorentzBath& bath :
         {LorentzBath{0.1, 0.0, 1.0}, LorentzBath{0.01, 0.05, 1.0},
          LorentzBath{0.7, 0.9, 1.3}}) {
      const auto decomp = decompose(bath);
      const double t_max = 10.0 / std::max(bath.gamma, bath.omega0);
      for (int i = 0; i < 1000; ++i) {
        const double t = t_max * i / 999.0;
        Complex real_part = 0, imag_part = 0;
        for (int k = 0; k < 2; ++k) {
          real_part += decomp.real_coeffs[k] * std::exp(-decomp.nu[k] * t);
          imag_part += decomp.imag_coeffs[k] * std::exp(-decomp.nu[k] * t);
        }
        const Complex rebuilt(real_part.real(), imag_part.real());
        worst_reconstruction =
            std::max({worst_reconstruction,
                      std::abs(rebuilt - correlation(bath, t)),
                      std::abs(real_part.imag()), std::abs(imag_part.imag())});
      }
    }

    // integral of the spectral density via the tan-substitution quadrature
    double worst_integral = 0.0;
    for (const LorentzBath& bath :
         {LorentzBath{0.04, 0.1, 1.0}, LorentzBath{0.3, 0.02, 2.0}}) {
      const int n = 20000;
      const double a = -M_PI / 2, b = M_PI / 2;
      const double h = (b - a) / n;
      auto f = [&](double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return bath.lambda * bath.gamma /
               (M_PI * (s * s + bath.gamma * bath.gamma * c * c));
      };
      double sum = f(a) + f(b);
      for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
      worst_integral =
          std::max(worst_integral, std::abs(sum * h / 3.0 - bath.lambda));
    }

    report(8, worst_reconstruction <= 1e-12 && worst_integral <= 1e-6,
           "correlation reconstruction " + num(worst_reconstruction) +
               " (<=1e-12) on 1000-point grids; spectral integral deviation " +
               num(worst_integral) + " (<=1e-6)");
  }

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) +
                                    " criterion(s) failed")
            << " in " << num(elapsed_seconds(t0)) << " s" << std::endl;
  return failures;
}
