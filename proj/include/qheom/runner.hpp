// runner.hpp — batch experiment runner behind the command-line tool
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qheom/heom.hpp"
#include "qheom/reference.hpp"

namespace qheom {

struct RunConfig {
  // model
  double w1 = 1.0, w2 = 1.0;
  double alpha1 = 1.0, alpha2 = 1.0;
  // bath (omega0 fixed to 1)
  double lambda = 0.01;
  double gamma = 0.05;
  // initial state: a named state, or "custom" with explicit amplitudes
  std::string initial = "fig2";
  std::optional<Complex> c1, c2;
  // solver
  double dt = 0.01;
  double t_end = 100.0;
  int depth = 0;  // 0 = choose from lambda
  double convergence_tol = 1e-4;
  int sample_stride = 10;
  int max_depth = 40;
  // steady-state extraction
  double window = 0.0;  // 0 = t_end/6
  double steady_tol = 2e-3;
  // run selection
  std::string mode = "heom";  // heom | rwa | oracle
  std::string out = "out.csv";
  std::vector<double> gammas;  // sweep grid
};

// Initial state named by the config (validated), plus its single-excitation
// amplitudes when it has them.
struct ResolvedInitial {
  InitialState state;
  std::optional<std::pair<Complex, Complex>> amplitudes;
};
ResolvedInitial resolve_initial(const RunConfig& cfg);

struct SimulateOutcome {
  TimeSeries series;
  int depth = 0;  // converged depth (heom mode only)
  double max_trace_error = 0.0;
  std::string mode;
};
SimulateOutcome run_simulate(const RunConfig& cfg);

struct SweepRow {
  double gamma = 0.0;
  double steady = 0.0;   // final-window mean concurrence
  bool converged = false;  // windowed settling test passed
  int depth = 0;
};
// One row per gamma; rows are computed concurrently and kept in input order.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct CompareOutcome {
  std::vector<double> t;
  std::vector<double> heom;
  std::vector<double> rwa;
  std::optional<std::vector<double>> oracle;  // present when gamma = 0
  int depth = 0;
  double max_trace_error = 0.0;
};
CompareOutcome run_compare(const RunConfig& cfg);
std::string compare_csv(const CompareOutcome& outcome);

struct Preset {
  std::string name;
  std::string description;
  std::string config;  // flat key=value text, same as the shipped files
};
const std::vector<Preset>& presets();

// Full command-line entry point (subcommands simulate, sweep, compare,
// presets). args excludes argv[0]. Exit codes: 0 success, 2 config error,
// 3 numerical instability.
int cli_main(const std::vector<std::string>& args);

}  // namespace qheom
