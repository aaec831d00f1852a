#include "qheom/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace qheom {

namespace {

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.dt = cfg.dt;
  // Round t_end up to a whole number of sample intervals so every sample
  // lands on the t = k * dt * stride grid shared with the other engines.
  const double interval = cfg.dt * cfg.sample_stride;
  s.t_end = std::ceil(cfg.t_end / interval - 1e-9) * interval;
  s.sample_stride = cfg.sample_stride;
  s.depth = cfg.depth > 0 ? cfg.depth : default_depth(cfg.lambda);
  s.convergence_tol = cfg.convergence_tol;
  return s;
}

double extraction_window(const RunConfig& cfg, double t_end) {
  return cfg.window > 0.0 ? cfg.window : t_end / 6.0;
}

ModelSpec model_from(const RunConfig& cfg) {
  return two_qubit_common_bath(cfg.w1, cfg.w2, cfg.alpha1, cfg.alpha2);
}

std::vector<double> sample_grid(const SolverConfig& s) {
  const double interval = s.dt * s.sample_stride;
  const auto count = static_cast<std::size_t>(
      std::llround(std::ceil(s.t_end / interval - 1e-9)));
  std::vector<double> grid(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    grid[k] = static_cast<double>(k) * interval;
  }
  return grid;
}

TimeSeries series_from_rwa(const RwaAmplitudes& amps) {
  TimeSeries series;
  series.rows.reserve(amps.t.size());
  for (std::size_t k = 0; k < amps.t.size(); ++k) {
    const Matrix rho = rwa_density(amps.c1[k], amps.c2[k]);
    ObservableRecord row = diagnostics(rho);
    row.t = amps.t[k];
    row.concurrence_raw = concurrence_raw(rho);
    row.concurrence = std::max(0.0, row.concurrence_raw);
    series.rows.push_back(row);
  }
  return series;
}

TimeSeries series_from_oracle(const OracleSeries& oracle) {
  TimeSeries series;
  series.rows.reserve(oracle.t.size());
  for (std::size_t k = 0; k < oracle.t.size(); ++k) {
    const Matrix rho = ops::hermitize(oracle.rho[k]);
    ObservableRecord row = diagnostics(rho);
    row.t = oracle.t[k];
    row.concurrence_raw = concurrence_raw(rho);
    row.concurrence = std::max(0.0, row.concurrence_raw);
    series.rows.push_back(row);
  }
  return series;
}

FockOracleConfig oracle_config(const RunConfig& cfg, const SolverConfig& s) {
  FockOracleConfig oc;
  const double interval = s.dt * s.sample_stride;
  // Substep count chosen so oracle samples land on the shared grid with a
  // step close to the 0.002 default.
  oc.sample_stride = std::max(1, static_cast<int>(std::llround(interval / 0.002)));
  oc.dt = interval / oc.sample_stride;
  oc.t_end = s.t_end;
  oc.n_fock = 8;
  return oc;
}

double final_window_mean(const TimeSeries& series, double window) {
  const double t_end = series.rows.back().t;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& row : series.rows) {
    if (row.t >= t_end - window) {
      sum += row.concurrence;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  const std::string re = text.substr(0, comma);
  const std::string im =
      comma == std::string::npos ? "0" : text.substr(comma + 1);
  double re_value = 0.0;
  double im_value = 0.0;
  auto conv = [](const std::string& s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("bad complex literal: '" + s + "'");
    }
  };
  conv(re, re_value);
  conv(im, im_value);
  return {re_value, im_value};
}

}  // namespace

ResolvedInitial resolve_initial(const RunConfig& cfg) {
  ResolvedInitial resolved;
  if (cfg.initial == "custom") {
    if (!cfg.c1 || !cfg.c2) {
      throw std::invalid_argument(
          "initial=custom requires explicit --c1 and --c2 amplitudes");
    }
    resolved.state = single_excitation_state(*cfg.c1, *cfg.c2);
    resolved.amplitudes = {{*cfg.c1, *cfg.c2}};
    return resolved;
  }
  if (cfg.c1 || cfg.c2) {
    throw std::invalid_argument(
        "--c1/--c2 are only valid together with --initial custom");
  }
  resolved.state = named_initial_state(cfg.initial);
  resolved.amplitudes = {named_amplitudes(cfg.initial)};
  return resolved;
}

SimulateOutcome run_simulate(const RunConfig& cfg) {
  const SolverConfig s = solver_config(cfg);
  const ResolvedInitial initial = resolve_initial(cfg);
  SimulateOutcome outcome;
  outcome.mode = cfg.mode;

  if (cfg.mode == "heom") {
    const ModelSpec model = model_from(cfg);
    const LorentzBath bath{cfg.lambda, cfg.gamma, 1.0};
    ConvergeResult result =
        converge(initial.state.rho0, model, bath, s, {}, cfg.max_depth);
    outcome.series = std::move(result.series);
    outcome.depth = result.depth;
    outcome.max_trace_error = result.max_trace_error;
  } else if (cfg.mode == "rwa") {
    const LorentzBath bath{cfg.lambda, cfg.gamma, 1.0};
    const auto [c1, c2] = *initial.amplitudes;
    outcome.series = series_from_rwa(rwa_evolve(c1, c2, bath, sample_grid(s)));
  } else if (cfg.mode == "oracle") {
    if (cfg.gamma != 0.0) {
      throw std::invalid_argument("mode=oracle requires gamma = 0");
    }
    const ModelSpec model = model_from(cfg);
    outcome.series = series_from_oracle(single_mode_oracle(
        model, cfg.lambda, initial.state, oracle_config(cfg, s)));
  } else {
    throw std::invalid_argument("unknown simulate mode: " + cfg.mode +
                                " (expected heom, rwa, or oracle)");
  }

  for (const auto& row : outcome.series.rows) {
    outcome.max_trace_error = std::max(outcome.max_trace_error, row.trace_error);
  }
  return outcome;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  if (cfg.gammas.empty()) {
    throw std::invalid_argument("sweep requires a non-empty --gammas list");
  }
  for (double g : cfg.gammas) {
    if (!(g > 0.0)) {
      throw std::invalid_argument("sweep gamma values must be > 0");
    }
  }
  const SolverConfig s = solver_config(cfg);
  const double window = extraction_window(cfg, s.t_end);
  const ResolvedInitial initial = resolve_initial(cfg);
  const ModelSpec model = model_from(cfg);

  auto run_one = [&, initial, model](double gamma) {
    const LorentzBath bath{cfg.lambda, gamma, 1.0};
    ConvergeResult result =
        converge(initial.state.rho0, model, bath, s, {}, cfg.max_depth);
    SweepRow row;
    row.gamma = gamma;
    row.depth = result.depth;
    const auto steady = steady_state_extract(result.series, window, cfg.steady_tol);
    row.converged = steady.has_value();
    row.steady = steady ? *steady : final_window_mean(result.series, window);
    return row;
  };

  std::vector<std::future<SweepRow>> futures;
  futures.reserve(cfg.gammas.size());
  for (double gamma : cfg.gammas) {
    futures.push_back(std::async(std::launch::async, run_one, gamma));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& future : futures) {
    rows.push_back(future.get());
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "gamma,steady_concurrence,converged,depth\n";
  for (const auto& row : rows) {
    out += format_double(row.gamma);
    out += ',';
    out += format_double(row.steady);
    out += ',';
    out += row.converged ? '1' : '0';
    out += ',';
    out += std::to_string(row.depth);
    out += '\n';
  }
  return out;
}

CompareOutcome run_compare(const RunConfig& cfg) {
  const SolverConfig s = solver_config(cfg);
  const ResolvedInitial initial = resolve_initial(cfg);
  const ModelSpec model = model_from(cfg);
  const LorentzBath bath{cfg.lambda, cfg.gamma, 1.0};

  ConvergeResult heom =
      converge(initial.state.rho0, model, bath, s, {}, cfg.max_depth);

  CompareOutcome outcome;
  outcome.depth = heom.depth;
  outcome.max_trace_error = heom.max_trace_error;
  outcome.t.reserve(heom.series.rows.size());
  outcome.heom.reserve(heom.series.rows.size());
  for (const auto& row : heom.series.rows) {
    outcome.t.push_back(row.t);
    outcome.heom.push_back(row.concurrence);
  }

  const auto [c1, c2] = *initial.amplitudes;
  const RwaAmplitudes amps = rwa_evolve(c1, c2, bath, outcome.t);
  outcome.rwa.reserve(outcome.t.size());
  for (std::size_t k = 0; k < outcome.t.size(); ++k) {
    outcome.rwa.push_back(rwa_concurrence(amps.c1[k], amps.c2[k]));
  }

  if (cfg.gamma == 0.0) {
    const OracleSeries oracle = single_mode_oracle(
        model, cfg.lambda, initial.state, oracle_config(cfg, s));
    if (oracle.t.size() != outcome.t.size()) {
      throw std::runtime_error("compare: oracle grid misaligned");
    }
    std::vector<double> values;
    values.reserve(oracle.t.size());
    for (const auto& rho : oracle.rho) {
      values.push_back(concurrence(ops::hermitize(rho)));
    }
    outcome.oracle = std::move(values);
  }
  return outcome;
}

std::string compare_csv(const CompareOutcome& outcome) {
  std::string out = outcome.oracle
                        ? "t,heom,rwa,oracle,diff_heom_rwa,diff_heom_oracle\n"
                        : "t,heom,rwa,diff_heom_rwa\n";
  for (std::size_t k = 0; k < outcome.t.size(); ++k) {
    out += format_double(outcome.t[k]);
    out += ',';
    out += format_double(outcome.heom[k]);
    out += ',';
    out += format_double(outcome.rwa[k]);
    if (outcome.oracle) {
      out += ',';
      out += format_double((*outcome.oracle)[k]);
    }
    out += ',';
    out += format_double(std::abs(outcome.heom[k] - outcome.rwa[k]));
    if (outcome.oracle) {
      out += ',';
      out += format_double(std::abs(outcome.heom[k] - (*outcome.oracle)[k]));
    }
    out += '\n';
  }
  return out;
}

namespace {

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open for writing: " + path);
  }
  file << text;
  if (!file) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig1-gamma0",
       "strong coupling (lambda=0.1) from the ground pair, single-mode limit; "
       "run with: compare",
       "# Strong coupling from the ground pair in the single-mode limit.\n"
       "# The hierarchy curve is cross-checked against the Fock-space "
       "integrator.\n"
       "# Run: qheom compare --config presets/fig1-gamma0.cfg\n"
       "initial=ground-pair\n"
       "lambda=0.1\n"
       "gamma=0\n"
       "t-end=50\n"
       "dt=0.01\n"
       "sample-stride=10\n"
       "depth=12\n"
       "out=fig1-gamma0.csv\n"},
      {"fig1-gamma0.05",
       "strong coupling, mildly broadened mode; run with: simulate",
       "# Strong coupling with a mildly broadened cavity mode.\n"
       "# Run: qheom simulate --config presets/fig1-gamma0.05.cfg\n"
       "mode=heom\n"
       "initial=ground-pair\n"
       "lambda=0.1\n"
       "gamma=0.05\n"
       "t-end=50\n"
       "dt=0.01\n"
       "sample-stride=10\n"
       "depth=12\n"
       "out=fig1-gamma0.05.csv\n"},
      {"fig1-gamma0.2",
       "strong coupling, strongly broadened mode; run with: simulate",
       "# Strong coupling with a strongly broadened cavity mode.\n"
       "# Run: qheom simulate --config presets/fig1-gamma0.2.cfg\n"
       "mode=heom\n"
       "initial=ground-pair\n"
       "lambda=0.1\n"
       "gamma=0.2\n"
       "t-end=50\n"
       "dt=0.01\n"
       "sample-stride=10\n"
       "depth=12\n"
       "out=fig1-gamma0.2.csv\n"},
      {"fig2-gamma0.01",
       "weak coupling from the mixed single-excitation state; run with: compare",
       "# Weak coupling from the (1,2)/sqrt(5) single-excitation state.\n"
       "# Run: qheom compare --config presets/fig2-gamma0.01.cfg\n"
       "initial=fig2\n"
       "lambda=0.01\n"
       "gamma=0.01\n"
       "t-end=1200\n"
       "dt=0.01\n"
       "sample-stride=20\n"
       "out=fig2-gamma0.01.csv\n"},
      {"fig2-gamma0.05",
       "weak coupling, intermediate broadening; run with: compare",
       "# Weak coupling, intermediate cavity broadening.\n"
       "# Run: qheom compare --config presets/fig2-gamma0.05.cfg\n"
       "initial=fig2\n"
       "lambda=0.01\n"
       "gamma=0.05\n"
       "t-end=1200\n"
       "dt=0.01\n"
       "sample-stride=20\n"
       "out=fig2-gamma0.05.csv\n"},
      {"fig2-gamma0.1",
       "weak coupling, strong broadening; run with: compare",
       "# Weak coupling, strong cavity broadening.\n"
       "# Run: qheom compare --config presets/fig2-gamma0.1.cfg\n"
       "initial=fig2\n"
       "lambda=0.01\n"
       "gamma=0.1\n"
       "t-end=1200\n"
       "dt=0.01\n"
       "sample-stride=20\n"
       "out=fig2-gamma0.1.csv\n"},
      {"fig2-sweep",
       "steady-state concurrence across the gamma grid; run with: sweep",
       "# Steady-state concurrence versus cavity broadening.\n"
       "# Run: qheom sweep --config presets/fig2-sweep.cfg\n"
       "initial=fig2\n"
       "lambda=0.01\n"
       "gammas=0.005,0.01,0.02,0.05,0.1,0.2\n"
       "t-end=4000\n"
       "dt=0.01\n"
       "sample-stride=20\n"
       "steady-tol=0.002\n"
       "out=fig2-sweep.csv\n"},
  };
  return table;
}

int cli_main(const std::vector<std::string>& args) {
  RunConfig cfg;
  std::string c1_text, c2_text;
  std::string preset_name;

  CLI::App app{
      "qheom: open-system dynamics of qubits in a Lorentz-broadened cavity "
      "at zero temperature"};
  app.set_config("--config", "",
                 "flat key=value config file ('#' comments); flags override");
  app.require_subcommand(1);

  app.add_option("--w1", cfg.w1, "qubit 1 splitting")->capture_default_str();
  app.add_option("--w2", cfg.w2, "qubit 2 splitting")->capture_default_str();
  app.add_option("--alpha1", cfg.alpha1, "qubit 1 coupling weight")
      ->capture_default_str();
  app.add_option("--alpha2", cfg.alpha2, "qubit 2 coupling weight")
      ->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "system-bath coupling strength")
      ->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "cavity-mode broadening")
      ->capture_default_str();
  app.add_option("--initial", cfg.initial,
                 "ground-pair | fig2 | phi-minus | phi-plus | custom")
      ->capture_default_str();
  app.add_option("--c1", c1_text, "custom amplitude of |10>, 're' or 're,im'");
  app.add_option("--c2", c2_text, "custom amplitude of |01>, 're' or 're,im'");
  app.add_option("--dt", cfg.dt, "integrator step")->capture_default_str();
  app.add_option("--t-end", cfg.t_end, "evolution horizon")->capture_default_str();
  app.add_option("--depth", cfg.depth,
                 "starting hierarchy depth (0 = choose from lambda)")
      ->capture_default_str();
  app.add_option("--max-depth", cfg.max_depth, "hierarchy depth cap")
      ->capture_default_str();
  app.add_option("--tol", cfg.convergence_tol, "depth-convergence tolerance")
      ->capture_default_str();
  app.add_option("--sample-stride", cfg.sample_stride, "steps per sample")
      ->capture_default_str();
  app.add_option("--window", cfg.window,
                 "steady-state window (0 = t_end/6)")
      ->capture_default_str();
  app.add_option("--steady-tol", cfg.steady_tol,
                 "steady-state settling tolerance")
      ->capture_default_str();
  app.add_option("--mode", cfg.mode, "simulate engine: heom | rwa | oracle")
      ->check(CLI::IsMember({"heom", "rwa", "oracle", "sweep"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output CSV path")->capture_default_str();
  app.add_option("--gammas", cfg.gammas, "sweep grid, comma separated")
      ->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "run one engine, write the observable CSV");
  auto* sweep = app.add_subcommand("sweep", "steady-state concurrence across a gamma grid");
  auto* compare = app.add_subcommand(
      "compare", "heom vs rwa concurrence (plus oracle at gamma=0)");
  auto* preset_cmd =
      app.add_subcommand("presets", "list bundled configs, or print one");
  preset_cmd->add_option("name", preset_name, "preset to print");
  for (auto* sub : {simulate, sweep, compare, preset_cmd}) {
    sub->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!c1_text.empty()) cfg.c1 = parse_complex(c1_text);
    if (!c2_text.empty()) cfg.c2 = parse_complex(c2_text);

    if (preset_cmd->parsed()) {
      if (preset_name.empty()) {
        for (const auto& preset : presets()) {
          std::cout << preset.name << "\t" << preset.description << "\n";
        }
        return 0;
      }
      for (const auto& preset : presets()) {
        if (preset.name == preset_name) {
          std::cout << preset.config;
          return 0;
        }
      }
      std::cerr << "unknown preset: " << preset_name << "\n";
      return 2;
    }

    if (simulate->parsed()) {
      if (cfg.mode == "sweep") {
        throw std::invalid_argument("mode=sweep: use the sweep subcommand");
      }
      SimulateOutcome outcome = run_simulate(cfg);
      write_csv_file(outcome.series, cfg.out);
      std::cout << "mode=" << outcome.mode << " depth=" << outcome.depth
                << " max_trace_error=" << format_double(outcome.max_trace_error)
                << "\n";
      std::cout << "wrote " << cfg.out << " (" << outcome.series.rows.size()
                << " samples)\n";
      return 0;
    }

    if (sweep->parsed()) {
      const auto rows = run_sweep(cfg);
      write_text_file(sweep_csv(rows), cfg.out);
      for (const auto& row : rows) {
        std::cout << "gamma=" << format_double(row.gamma)
                  << " steady=" << format_double(row.steady)
                  << " converged=" << (row.converged ? 1 : 0)
                  << " depth=" << row.depth << "\n";
      }
      std::cout << "wrote " << cfg.out << " (" << rows.size() << " rows)\n";
      return 0;
    }

    if (compare->parsed()) {
      CompareOutcome outcome = run_compare(cfg);
      write_text_file(compare_csv(outcome), cfg.out);
      std::cout << "depth=" << outcome.depth << " max_trace_error="
                << format_double(outcome.max_trace_error) << "\n";
      std::cout << "wrote " << cfg.out << " (" << outcome.t.size()
                << " samples)\n";
      return 0;
    }
  } catch (const InstabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qheom
