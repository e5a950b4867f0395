#pragma once

// Grid sweeps over SystemParams fields, argmax search, and the time-domain
// experiment behind the Wigner/variance panels.

#include "gauge_squeeze/gaussian_dynamics.hpp"
#include "gauge_squeeze/model.hpp"
#include "gauge_squeeze/observables.hpp"
#include "gauge_squeeze/stability.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gauge_squeeze {

enum class Observable { var_q, squeeze_db, n_eff, var_p, stable, spectral_abscissa };

// Canonical column order.
inline constexpr Observable kAllObservables[] = {
    Observable::var_q, Observable::squeeze_db,  Observable::n_eff,
    Observable::var_p, Observable::stable, Observable::spectral_abscissa};

std::string_view to_string(Observable o);
std::optional<Observable> parse_observable(std::string_view name);

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double value(std::size_t i) const;
};

struct SweepSpec {
  SystemParams base;
  Axis axis1;
  std::optional<Axis> axis2;
  std::vector<Observable> observables{std::begin(kAllObservables),
                                      std::end(kAllObservables)};
  std::string output_path;
  StabilityOptions stability;
};

// ConfigError on the first violated constraint.
void validate(const SweepSpec& spec);

struct SweepRecord {
  double axis1 = 0.0;
  std::optional<double> axis2;
  bool stable = false;
  std::optional<double> spectral_abscissa;
  std::optional<double> var_q;
  std::optional<double> squeeze_db;
  std::optional<double> n_eff;
  std::optional<double> var_p;
  std::string error; // empty when the point evaluated cleanly

  // stable maps to 1/0; other observables are empty at unstable points.
  std::optional<double> value(Observable o) const;
};

struct SweepMetadata {
  std::string version;
  std::string timestamp;
  std::string param_hash;
  std::vector<std::string> spec_echo; // "key = value" lines
};

struct SweepDataset {
  std::string axis1_name;
  std::string axis2_name; // empty for 1D sweeps
  std::size_t count1 = 0;
  std::size_t count2 = 1;
  std::vector<Observable> observables;
  std::vector<SweepRecord> records; // row-major, axis1 outer
  SweepMetadata meta;
};

// Full pipeline for one parameter point: effective model, drift/diffusion,
// stability, Lyapunov steady state, mechanical observables. Never throws;
// failures are recorded in the returned record.
SweepRecord evaluate_point(const SystemParams& params,
                           const StabilityOptions& stability = {});

struct ExecutionOptions {
  int threads = 0; // 0: OpenMP default, capped by GAUGE_SQUEEZE_THREADS
};

// Worker count after applying the GAUGE_SQUEEZE_THREADS cap.
int worker_count(int requested);

SweepDataset run_sweep(const SweepSpec& spec, const ExecutionOptions& exec = {});
SweepDataset run_sweep_serial(const SweepSpec& spec);

enum class Goal { maximize, minimize };

struct Optimum {
  std::size_t index = 0;
  double axis1 = 0.0;
  std::optional<double> axis2;
  double value = 0.0;
};

// Grid extremum over stable points; ties resolve to the lowest axis1 and
// then axis2 value. NoStablePoints if nothing qualifies.
Optimum find_optimum(const SweepDataset& ds, Observable observable,
                     Goal goal = Goal::maximize);

struct DynamicsConfig {
  SystemParams params;
  double t_end = 200.0;
  double dt = 0.01;
  std::size_t store_every = 10;
  std::size_t wigner_points = 201;
  double wigner_extent = 5.0;
  std::optional<CovarianceMatrix> initial; // default: thermal_initial_state
};

// diag[1/2, 1/2, 1/2, 1/2, (n+1/2) e^{2r}, (n+1/2) e^{-2r}]: vacuum optics
// and acoustics, thermal mechanics expressed in the squeezed frame.
CovarianceMatrix thermal_initial_state(double thermal_occupation, double r);

struct VarianceSeries {
  std::vector<double> times;
  std::vector<double> var_q;
  std::vector<double> var_p;
};

// Lab-frame mechanical variances along an RK4 covariance trajectory.
VarianceSeries variance_series(const DriftMatrix& drift,
                               const DiffusionMatrix& diffusion,
                               const CovarianceMatrix& initial, double r,
                               double t_end, double dt,
                               const IntegratorOptions& opts = {});

struct DynamicsResult {
  VarianceSeries series;
  StabilityReport stability;
  MechanicalState final_state;
  WignerGrid wigner; // of the final lab-frame block
};

// UnstableSystem if the drift matrix is not stable.
DynamicsResult run_dynamics_experiment(const DynamicsConfig& cfg);

} // namespace gauge_squeeze
