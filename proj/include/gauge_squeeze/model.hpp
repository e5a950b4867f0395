#pragma once

// Linearized three-mode model: optical mode a1, Brillouin acoustic mode b_a
// and Duffing mechanical mode b_m, with a phase-modulated hopping between the
// two phonon modes. Every rate is in units of the bare mechanical frequency.

#include "gauge_squeeze/types.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <string_view>

namespace gauge_squeeze {

struct SystemParams {
  double omega_m = 1.0;                 // omega_m, reference unit
  double single_photon_coupling = 1e-4; // g_m
  double optical_decay = 0.02;          // kappa
  double acoustic_decay = 0.4;          // gamma_a
  double mechanical_decay = 1e-4;       // gamma_m
  double duffing = 1e-4;                // eta
  double thermal_occupation = 100.0;    // n_th
  double optomech_coupling = 0.15;      // G_m
  double brillouin_coupling = 0.0;      // G_a
  double hopping = 0.0;                 // J_m
  double gauge_phase = std::numbers::pi / 2; // theta
  double acoustic_detuning = 3.5;       // Delta_a
  // Delta_tilde; empty means the red-sideband condition -omega_m'.
  std::optional<double> optical_detuning;
  double mechanical_mean_field_re = 0.0; // Re(beta_m), only enters Lambda
};

// Throws DomainError naming the first violated constraint.
void validate(const SystemParams& p);

struct EffectiveModel {
  double squeezing = 0.0;         // r
  double duffing_shift = 0.0;     // Lambda = 24 eta Re(beta_m)^2
  double frequency = 1.0;         // omega_m'
  double optomech_coupling = 0.0; // G_m' = G_m e^{-r}
  double hopping = 0.0;           // J_m' = J_m cosh r
  double optical_detuning = -1.0; // resolved Delta_tilde
};

// r = ln(1 + 2 Lambda / omega_m) / 4.
double squeezing_parameter(double duffing_shift, double omega_m);

// Re(beta_m) that realizes a target Lambda for the given Duffing coefficient.
double mean_field_for_shift(double duffing_shift, double duffing);

EffectiveModel effective_model(const SystemParams& p);

DriftMatrix build_drift(const EffectiveModel& eff, const SystemParams& p);

DiffusionMatrix build_diffusion(const SystemParams& p, double r);

// Same diffusion matrix, assembled from the input-noise correlators of the
// squeezed-frame Langevin equations rather than the closed form. Used as a
// consistency oracle for build_diffusion.
DiffusionMatrix diffusion_from_noise_correlations(const SystemParams& p, double r);

// Named numeric fields, keyed by their config names (G_m, Delta_a, ...).
// Delta_tilde is handled separately because of its sentinel.
struct ParamField {
  std::string_view name;
  double SystemParams::*member;
};

std::span<const ParamField> param_fields();

// Returns nullptr for unknown names. "Delta_tilde" materializes the
// optional so that sweeps over it work.
double* param_slot(SystemParams& p, std::string_view name);
std::optional<double> param_value(const SystemParams& p, std::string_view name);

} // namespace gauge_squeeze
