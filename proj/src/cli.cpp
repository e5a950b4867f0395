#include "gauge_squeeze/cli.hpp"

#include "gauge_squeeze/config.hpp"
#include "gauge_squeeze/csv.hpp"
#include "gauge_squeeze/errors.hpp"
#include "gauge_squeeze/gaussian_dynamics.hpp"
#include "gauge_squeeze/observables.hpp"
#include "gauge_squeeze/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <ostream>
#include <string>
#include <vector>

namespace gauge_squeeze {

namespace {

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
  cmd->add_option("--config,-c", args.config_path, "Configuration file (key = value)");
  cmd->add_option("--set,-s", args.overrides, "Override a config key: key=value")
      ->allow_extra_args(false);
}

RunConfig build_config(const ConfigArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty())
    cfg = load_config(args.config_path);
  for (const auto& o : args.overrides)
    apply_override(cfg, o);
  return cfg;
}

// Config lines the sweep echo does not carry on its own.
std::vector<std::string> provenance_lines(const RunConfig& cfg) {
  std::vector<std::string> lines;
  lines.push_back(cfg.mode == ParamMode::effective
                      ? "mode = effective"
                      : "mode = from-drives (interpretation-dependent mean field)");
  if (cfg.lambda)
    lines.push_back("Lambda = " + format_number(*cfg.lambda));
  if (cfg.omega_m_hz)
    lines.push_back("omega_m_hz = " + format_number(*cfg.omega_m_hz));
  return lines;
}

template <class Write>
void emit(const std::string& path, std::ostream& fallback, Write&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream os = open_output(path);
  write(os);
  os.flush();
  if (!os)
    throw IoError("write failed for '" + path + "'");
}

int cmd_sweep(const ConfigArgs& args, const std::string& output, int threads,
              bool serial, std::ostream& out, std::ostream& err) {
  RunConfig cfg = build_config(args);
  if (!output.empty())
    cfg.output_path = output;
  const SweepSpec spec = make_sweep_spec(cfg);
  SweepDataset ds = serial ? run_sweep_serial(spec) : run_sweep(spec, {threads});

  const auto extra = provenance_lines(cfg);
  ds.meta.spec_echo.insert(ds.meta.spec_echo.begin(), extra.begin(), extra.end());
  ds.meta.param_hash = param_hash(ds.meta.spec_echo);

  emit(cfg.output_path, out, [&](std::ostream& os) { write_sweep_csv(os, ds); });

  std::size_t stable = 0, failed = 0;
  for (const auto& r : ds.records) {
    stable += r.stable ? 1 : 0;
    failed += (!r.error.empty() && r.error != "unstable") ? 1 : 0;
  }
  err << "sweep: " << ds.records.size() << " points, " << stable << " stable";
  if (failed > 0)
    err << ", " << failed << " failed";
  if (!cfg.output_path.empty())
    err << " -> " << cfg.output_path;
  err << "\n";
  for (std::size_t k = 0; k < ds.records.size(); ++k) {
    const auto& r = ds.records[k];
    if (!r.error.empty() && r.error != "unstable")
      err << "  point " << k << ": " << r.error << "\n";
  }
  return 0;
}

int cmd_dynamics(const ConfigArgs& args, const std::string& output,
                 const std::string& wigner_output, std::ostream& out, std::ostream& err) {
  RunConfig cfg = build_config(args);
  if (!output.empty())
    cfg.output_path = output;
  if (!wigner_output.empty())
    cfg.wigner_output_path = wigner_output;
  const DynamicsResult res = run_dynamics_experiment(make_dynamics_config(cfg));
  const auto echo = echo_config(cfg);

  emit(cfg.output_path, out,
       [&](std::ostream& os) { write_series_csv(os, res.series, echo); });
  if (!cfg.wigner_output_path.empty())
    emit(cfg.wigner_output_path, out,
         [&](std::ostream& os) { write_wigner_csv(os, res.wigner, echo); });

  err << "dynamics: final var_q = " << format_number(res.final_state.var_q)
      << ", var_p = " << format_number(res.final_state.var_p)
      << ", squeeze_db = " << format_number(res.final_state.squeeze_db) << "\n";
  return 0;
}

int cmd_wigner(const ConfigArgs& args, const std::string& output, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg = build_config(args);
  if (!output.empty())
    cfg.wigner_output_path = output;
  const SystemParams p = resolve_params(cfg);
  const EffectiveModel eff = effective_model(p);
  const CovarianceMatrix cov =
      solve_lyapunov(build_drift(eff, p), build_diffusion(p, eff.squeezing));
  const MechanicalState s = mechanical_state(cov, eff.squeezing);
  const auto axis = default_wigner_axis(s.v_lab, cfg.wigner_points, cfg.wigner_extent);
  const WignerGrid g = wigner_grid(s.v_lab, axis, axis);

  emit(cfg.wigner_output_path, out,
       [&](std::ostream& os) { write_wigner_csv(os, g, echo_config(cfg)); });
  err << "wigner: var_q = " << format_number(s.var_q)
      << ", var_p = " << format_number(s.var_p)
      << ", normalization = " << format_number(g.normalization_check) << "\n";
  return 0;
}

int cmd_stability(const ConfigArgs& args, std::ostream& out) {
  const RunConfig cfg = build_config(args);
  const SystemParams p = resolve_params(cfg);
  const EffectiveModel eff = effective_model(p);
  StabilityOptions opts;
  opts.tol_stab = cfg.tol_stab;
  const StabilityReport rep = stability_report(build_drift(eff, p), opts);
  out << "spectral_abscissa = " << format_number(rep.spectral_abscissa) << "\n";
  out << "routh_hurwitz = " << (rep.routh_hurwitz_stable ? "stable" : "unstable") << "\n";
  out << "method = " << to_string(rep.method) << "\n";
  out << "verdict = "
      << (rep.borderline ? "borderline" : (rep.stable ? "stable" : "unstable")) << "\n";
  return 0;
}

int cmd_optimum(const std::string& input, const std::string& observable, bool minimize,
                std::ostream& out) {
  const auto obs = parse_observable(observable);
  if (!obs)
    throw ConfigError("unknown observable '" + observable + "'");
  const SweepDataset ds = read_sweep_csv(input);
  if (std::find(ds.observables.begin(), ds.observables.end(), *obs) ==
      ds.observables.end())
    throw ConfigError("dataset has no column '" + observable + "'");
  const Optimum best = find_optimum(ds, *obs, minimize ? Goal::minimize : Goal::maximize);

  // Print the winning row with the dataset's own header.
  SweepDataset one = ds;
  one.records = {ds.records[best.index]};
  std::ostringstream buf;
  write_sweep_csv(buf, one);
  std::istringstream lines(buf.str());
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#')
      out << line << "\n";
  out << "# index = " << best.index << ", axis1 (" << ds.axis1_name
      << ") = " << format_number(best.axis1);
  if (best.axis2)
    out << ", axis2 (" << ds.axis2_name << ") = " << format_number(*best.axis2);
  out << ", " << observable << " = " << format_number(best.value) << "\n";
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mechanical squeezing with synthetic magnetism: steady-state and "
               "dynamical Gaussian simulator",
               "gauge-squeeze"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  ConfigArgs sweep_args, dyn_args, wig_args, stab_args;
  std::string sweep_output, dyn_output, dyn_wigner_output, wig_output;
  std::string opt_input, opt_observable = "squeeze_db";
  int threads = 0;
  bool serial = false, minimize = false;

  auto* sweep = app.add_subcommand("sweep", "Run a 1D/2D parameter sweep to CSV");
  add_config_options(sweep, sweep_args);
  sweep->add_option("--output,-o", sweep_output, "Output CSV (overrides output_path)");
  sweep->add_option("--threads", threads, "Worker threads (0 = default)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_flag("--serial", serial, "Use the serial reference loop");

  auto* dyn = app.add_subcommand("dynamics", "Integrate the covariance in time");
  add_config_options(dyn, dyn_args);
  dyn->add_option("--output,-o", dyn_output, "Variance time-series CSV");
  dyn->add_option("--wigner-output", dyn_wigner_output, "Final-state Wigner grid CSV");

  auto* wig = app.add_subcommand("wigner", "Steady-state Wigner function grid");
  add_config_options(wig, wig_args);
  wig->add_option("--output,-o", wig_output, "Wigner grid CSV");

  auto* stab = app.add_subcommand("stability", "Spectral abscissa and stability verdict");
  add_config_options(stab, stab_args);

  auto* opt = app.add_subcommand("optimum", "Grid argmax of a sweep CSV");
  opt->add_option("--input,-i", opt_input, "Sweep CSV")->required();
  opt->add_option("--observable", opt_observable, "Observable column");
  opt->add_flag("--minimize", minimize, "Find the minimum instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sweep)
      return cmd_sweep(sweep_args, sweep_output, threads, serial, out, err);
    if (*dyn)
      return cmd_dynamics(dyn_args, dyn_output, dyn_wigner_output, out, err);
    if (*wig)
      return cmd_wigner(wig_args, wig_output, out, err);
    if (*stab)
      return cmd_stability(stab_args, out);
    if (*opt)
      return cmd_optimum(opt_input, opt_observable, minimize, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

} // namespace gauge_squeeze
