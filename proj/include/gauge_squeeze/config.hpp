#pragma once

// Flat "key = value" configuration with '#' comments. Keys are the
// SystemParams names (G_m, Delta_a, ...) plus sweep, dynamics and
// mean-field settings; unknown keys are rejected by name.

#include "gauge_squeeze/classical.hpp"
#include "gauge_squeeze/model.hpp"
#include "gauge_squeeze/sweep.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gauge_squeeze {

enum class ParamMode { effective, from_drives };

struct DriveSettings {
  double E_1 = 0.0;
  double Delta_1 = 0.0;
  double E_2 = 0.0;
  double Delta_2_prime = 0.0;
  double kappa_2 = 1.0;
  double g_a = 0.0;
  double damping = 0.5;
  int max_iter = 10'000;
};

struct RunConfig {
  SystemParams params;
  std::optional<double> lambda;     // sets Re(beta_m) = sqrt(Lambda / 24 eta)
  bool beta_set = false;
  std::optional<double> omega_m_hz; // display only
  ParamMode mode = ParamMode::effective;
  DriveSettings drives;

  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::vector<Observable> observables{std::begin(kAllObservables),
                                      std::end(kAllObservables)};
  std::string output_path;
  double tol_stab = 1e-10;

  double t_end = 200.0;
  double dt = 0.01;
  std::size_t store_every = 10;
  std::size_t wigner_points = 201;
  double wigner_extent = 5.0;
  std::string wigner_output_path;
};

// Plain decimals, plus multiples of pi: "pi", "0.5pi", "pi/2", "-3pi/2".
double parse_number(std::string_view text);

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
// "key=value" as given to --set.
void apply_override(RunConfig& cfg, std::string_view assignment);

RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Effective SystemParams after Lambda and from-drives resolution.
SystemParams resolve_params(const RunConfig& cfg);

SweepSpec make_sweep_spec(const RunConfig& cfg);
DynamicsConfig make_dynamics_config(const RunConfig& cfg);

// Resolved settings as "key = value" lines.
std::vector<std::string> echo_config(const RunConfig& cfg);

} // namespace gauge_squeeze
