#pragma once

// Classical (mean-field) steady state: adiabatic elimination of the strong
// control mode a2, and a damped fixed-point solver for the remaining
// amplitudes alpha_1, beta_a, beta_m.

#include <complex>

namespace gauge_squeeze {

using Amplitude = std::complex<double>;

struct ControlModeParams {
  double drive = 0.0;           // E_2
  double shifted_detuning = 0.0; // Delta_2'
  double decay = 1.0;           // kappa_2
  double brillouin_single = 0.0; // g_a
};

// alpha_2 = -E_2 / (i Delta_2' - kappa_2 / 2).
Amplitude control_mode_amplitude(const ControlModeParams& p);

// G_a = g_a |alpha_2|, with the phase absorbed into the mode definition.
double effective_brillouin_coupling(double brillouin_single, Amplitude alpha_2);

struct MeanFieldConfig {
  double omega_m = 1.0;
  double single_photon_coupling = 1e-4; // g_m
  double optical_decay = 0.02;          // kappa
  double acoustic_decay = 0.4;          // gamma_a
  double mechanical_decay = 1e-4;       // gamma_m
  double duffing = 0.0;                 // eta
  double hopping = 0.0;                 // J_m
  double gauge_phase = 0.0;             // theta
  double acoustic_detuning = 0.0;       // Delta_a
  double brillouin_coupling = 0.0;      // G_a
  double optical_detuning = 0.0;        // Delta_1 (bare)
  double drive = 0.0;                   // E_1, real

  double damping = 0.5;   // 0 < lambda <= 1
  int max_iter = 10'000;
  double tol = 1e-12;     // on successive-iterate distance, relative to |beta_m|
  Amplitude initial_beta_m{0.0, 0.0};
};

struct MeanFields {
  Amplitude alpha_1;
  Amplitude beta_a;
  Amplitude beta_m;
  Amplitude alpha_2; // zero unless supplied by the caller

  double effective_optical_detuning = 0.0; // Delta_1 + 2 g_m Re(beta_m)
  double optomech_coupling = 0.0;          // G_m = g_m |alpha_1|
  double duffing_shift = 0.0;              // Lambda = 24 eta Re(beta_m)^2
  int iterations = 0;
  double residual = 0.0;
  // The iteration returns the first fixed point reached from the initial
  // guess; other branches of a multistable mean field are not searched.
  bool first_fixed_point_only = true;
};

// Largest residual of the three steady-state equations, each scaled by its
// largest term (and at least 1).
double mean_field_residual(const MeanFieldConfig& cfg, const MeanFields& f);

// Throws NoConvergence carrying the last iterate distance.
MeanFields mean_field_fixed_point(const MeanFieldConfig& cfg);

} // namespace gauge_squeeze
