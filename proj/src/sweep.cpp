#include "gauge_squeeze/sweep.hpp"

#include "gauge_squeeze/csv.hpp"
#include "gauge_squeeze/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace gauge_squeeze {

std::string_view to_string(Observable o) {
  switch (o) {
  case Observable::var_q:
    return "var_q";
  case Observable::squeeze_db:
    return "squeeze_db";
  case Observable::n_eff:
    return "n_eff";
  case Observable::var_p:
    return "var_p";
  case Observable::stable:
    return "stable";
  case Observable::spectral_abscissa:
    return "spectral_abscissa";
  }
  return "unknown";
}

std::optional<Observable> parse_observable(std::string_view name) {
  for (Observable o : kAllObservables)
    if (to_string(o) == name)
      return o;
  return std::nullopt;
}

double Axis::value(std::size_t i) const {
  if (i + 1 == count)
    return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void validate(const SweepSpec& spec) {
  auto check_axis = [&](const Axis& a, const char* label) {
    SystemParams probe = spec.base;
    if (param_slot(probe, a.name) == nullptr)
      throw ConfigError(std::string(label) + ": unknown parameter '" + a.name + "'");
    if (a.count < 2)
      throw ConfigError(std::string(label) + ": count must be >= 2");
    if (!(a.min < a.max) || !std::isfinite(a.min) || !std::isfinite(a.max))
      throw ConfigError(std::string(label) + ": require finite min < max");
  };
  check_axis(spec.axis1, "axis1");
  if (spec.axis2) {
    check_axis(*spec.axis2, "axis2");
    if (spec.axis2->name == spec.axis1.name)
      throw ConfigError("axis2 repeats axis1 parameter '" + spec.axis1.name + "'");
  }
  if (spec.observables.empty())
    throw ConfigError("observables: at least one observable required");
}

std::optional<double> SweepRecord::value(Observable o) const {
  switch (o) {
  case Observable::var_q:
    return var_q;
  case Observable::squeeze_db:
    return squeeze_db;
  case Observable::n_eff:
    return n_eff;
  case Observable::var_p:
    return var_p;
  case Observable::stable:
    return stable ? 1.0 : 0.0;
  case Observable::spectral_abscissa:
    return spectral_abscissa;
  }
  return std::nullopt;
}

SweepRecord evaluate_point(const SystemParams& params,
                           const StabilityOptions& stability) {
  SweepRecord rec;
  try {
    const EffectiveModel eff = effective_model(params);
    const DriftMatrix drift = build_drift(eff, params);
    const DiffusionMatrix diffusion = build_diffusion(params, eff.squeezing);
    const StabilityReport rep = stability_report(drift, stability);
    rec.spectral_abscissa = rep.spectral_abscissa;
    rec.stable = rep.stable;
    if (!rep.stable) {
      rec.error = "unstable";
      return rec;
    }
    LyapunovOptions lopts;
    lopts.check_stability = false;
    const CovarianceMatrix cov = solve_lyapunov(drift, diffusion, lopts);
    const MechanicalState s = mechanical_state(cov, eff.squeezing);
    rec.var_q = s.var_q;
    rec.var_p = s.var_p;
    rec.squeeze_db = s.squeeze_db;
    rec.n_eff = s.n_eff;
  } catch (const Error& e) {
    rec.stable = false;
    rec.var_q = rec.var_p = rec.squeeze_db = rec.n_eff = std::nullopt;
    rec.error = e.what();
  }
  return rec;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("GAUGE_SQUEEZE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap <= 0)
      throw ConfigError(std::string("GAUGE_SQUEEZE_THREADS must be a positive integer, got '") +
                        env + "'");
    n = std::min<long>(n, cap);
  }
  return std::max(n, 1);
}

namespace {

std::vector<std::string> echo_lines(const SweepSpec& spec) {
  std::vector<std::string> lines;
  for (const auto& f : param_fields())
    lines.push_back(std::string(f.name) + " = " + format_number(spec.base.*f.member));
  lines.push_back("Delta_tilde = " + (spec.base.optical_detuning
                                          ? format_number(*spec.base.optical_detuning)
                                          : std::string("red-sideband")));
  auto axis = [](const Axis& a) {
    return a.name + "," + format_number(a.min) + "," + format_number(a.max) + "," +
           std::to_string(a.count);
  };
  lines.push_back("axis1 = " + axis(spec.axis1));
  if (spec.axis2)
    lines.push_back("axis2 = " + axis(*spec.axis2));
  std::string obs;
  for (Observable o : spec.observables) {
    if (!obs.empty())
      obs += ",";
    obs += to_string(o);
  }
  lines.push_back("observables = " + obs);
  lines.push_back("tol_stab = " + format_number(spec.stability.tol_stab));
  return lines;
}

SweepDataset prepare(const SweepSpec& spec) {
  validate(spec);
  SweepDataset ds;
  ds.axis1_name = spec.axis1.name;
  ds.count1 = spec.axis1.count;
  if (spec.axis2) {
    ds.axis2_name = spec.axis2->name;
    ds.count2 = spec.axis2->count;
  }
  ds.observables = spec.observables;
  ds.records.resize(ds.count1 * ds.count2);
  ds.meta.version = version_string();
  ds.meta.timestamp = utc_timestamp();
  ds.meta.spec_echo = echo_lines(spec);
  ds.meta.param_hash = param_hash(ds.meta.spec_echo);
  return ds;
}

SweepRecord evaluate_grid_point(const SweepSpec& spec, std::size_t index,
                                std::size_t count2) {
  const std::size_t i = index / count2;
  const std::size_t j = index % count2;
  SystemParams p = spec.base;
  const double v1 = spec.axis1.value(i);
  *param_slot(p, spec.axis1.name) = v1;
  std::optional<double> v2;
  if (spec.axis2) {
    v2 = spec.axis2->value(j);
    *param_slot(p, spec.axis2->name) = *v2;
  }
  SweepRecord rec = evaluate_point(p, spec.stability);
  rec.axis1 = v1;
  rec.axis2 = v2;
  return rec;
}

} // namespace

SweepDataset run_sweep_serial(const SweepSpec& spec) {
  SweepDataset ds = prepare(spec);
  for (std::size_t k = 0; k < ds.records.size(); ++k)
    ds.records[k] = evaluate_grid_point(spec, k, ds.count2);
  return ds;
}

SweepDataset run_sweep(const SweepSpec& spec, const ExecutionOptions& exec) {
  SweepDataset ds = prepare(spec);
  const int threads = worker_count(exec.threads);
  const auto total = static_cast<std::ptrdiff_t>(ds.records.size());
  // Each task writes only its own slot, so the merge is row-major by
  // construction whatever the schedule.
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t k = 0; k < total; ++k)
    ds.records[static_cast<std::size_t>(k)] =
        evaluate_grid_point(spec, static_cast<std::size_t>(k), ds.count2);
  return ds;
}

Optimum find_optimum(const SweepDataset& ds, Observable observable, Goal goal) {
  std::optional<Optimum> best;
  for (std::size_t k = 0; k < ds.records.size(); ++k) {
    const SweepRecord& rec = ds.records[k];
    if (!rec.stable)
      continue;
    const std::optional<double> v = rec.value(observable);
    if (!v || !std::isfinite(*v))
      continue;
    auto tie_key = [](const SweepRecord& r) {
      return std::pair{r.axis1, r.axis2.value_or(0.0)};
    };
    bool better = !best;
    if (best) {
      const bool strictly = goal == Goal::maximize ? *v > best->value : *v < best->value;
      better = strictly ||
               (*v == best->value && tie_key(rec) < tie_key(ds.records[best->index]));
    }
    if (better)
      best = Optimum{k, rec.axis1, rec.axis2, *v};
  }
  if (!best)
    throw NoStablePoints("dataset has no stable point with a value for " +
                         std::string(to_string(observable)));
  return *best;
}

CovarianceMatrix thermal_initial_state(double thermal_occupation, double r) {
  CovarianceMatrix v;
  const double n = thermal_occupation + 0.5;
  v.v.diagonal() << 0.5, 0.5, 0.5, 0.5, n * std::exp(2.0 * r), n * std::exp(-2.0 * r);
  return v;
}

VarianceSeries variance_series(const DriftMatrix& drift,
                               const DiffusionMatrix& diffusion,
                               const CovarianceMatrix& initial, double r,
                               double t_end, double dt,
                               const IntegratorOptions& opts) {
  const CovarianceTrajectory traj =
      evolve_covariance(drift, diffusion, initial, t_end, dt, opts);
  VarianceSeries s;
  s.times = traj.times;
  s.var_q.reserve(traj.values.size());
  s.var_p.reserve(traj.values.size());
  for (const CovarianceMatrix& v : traj.values) {
    s.var_q.push_back(position_variance(v, r));
    s.var_p.push_back(momentum_variance(v, r));
  }
  return s;
}

DynamicsResult run_dynamics_experiment(const DynamicsConfig& cfg) {
  const EffectiveModel eff = effective_model(cfg.params);
  const DriftMatrix drift = build_drift(eff, cfg.params);
  const DiffusionMatrix diffusion = build_diffusion(cfg.params, eff.squeezing);

  DynamicsResult out;
  out.stability = stability_report(drift);
  if (!out.stability.stable)
    throw UnstableSystem("dynamics experiment needs a stable operating point",
                         out.stability.spectral_abscissa);

  const CovarianceMatrix v0 = cfg.initial.value_or(
      thermal_initial_state(cfg.params.thermal_occupation, eff.squeezing));
  IntegratorOptions opts;
  opts.store_every = cfg.store_every;
  const CovarianceTrajectory traj =
      evolve_covariance(drift, diffusion, v0, cfg.t_end, cfg.dt, opts);

  out.series.times = traj.times;
  for (const CovarianceMatrix& v : traj.values) {
    out.series.var_q.push_back(position_variance(v, eff.squeezing));
    out.series.var_p.push_back(momentum_variance(v, eff.squeezing));
  }
  out.final_state = mechanical_state(traj.values.back(), eff.squeezing);
  const auto axis = default_wigner_axis(out.final_state.v_lab, cfg.wigner_points,
                                        cfg.wigner_extent);
  out.wigner = wigner_grid(out.final_state.v_lab, axis, axis);
  return out;
}

} // namespace gauge_squeeze
