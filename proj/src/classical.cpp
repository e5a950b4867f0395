#include "gauge_squeeze/classical.hpp"

#include "gauge_squeeze/errors.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

namespace gauge_squeeze {

namespace {
constexpr Amplitude I{0.0, 1.0};
}

Amplitude control_mode_amplitude(const ControlModeParams& p) {
  if (!(p.decay > 0))
    throw DomainError("kappa_2 must be > 0");
  if (p.drive < 0)
    throw DomainError("E_2 must be >= 0");
  return -p.drive / (I * p.shifted_detuning - 0.5 * p.decay);
}

double effective_brillouin_coupling(double brillouin_single, Amplitude alpha_2) {
  return brillouin_single * std::abs(alpha_2);
}

// Steady-state equations from the rotating-frame Hamiltonian with damping:
//   0 = (i Delta_1 - kappa/2) a1 + i g_m a1 (2 Re b_m) + E_1 + i G_a b_a
//   0 = -(i Delta_a + gamma_a/2) b_a - i J e^{i theta} b_m + i G_a a1
//   0 = -(i omega_m + gamma_m/2) b_m - i J e^{-i theta} b_a + i g_m |a1|^2
//       - i 2 eta (2 Re b_m)^3
// The last term is the Duffing force for the quartic (eta/2)(b + b^dag)^4
// in its real-amplitude reduction.

namespace {

struct LinearSolve {
  Amplitude alpha_1;
  Amplitude beta_a;
};

// Optical and acoustic amplitudes given the mechanical one (linear 2x2).
LinearSolve solve_optical_acoustic(const MeanFieldConfig& c, Amplitude beta_m) {
  const double det_eff =
      c.optical_detuning + 2.0 * c.single_photon_coupling * beta_m.real();
  const Amplitude a11 = I * det_eff - 0.5 * c.optical_decay;
  const Amplitude a12 = I * c.brillouin_coupling;
  const Amplitude a21 = I * c.brillouin_coupling;
  const Amplitude a22 = -(I * c.acoustic_detuning + 0.5 * c.acoustic_decay);
  const Amplitude b1 = -c.drive;
  const Amplitude b2 = I * c.hopping * std::exp(I * c.gauge_phase) * beta_m;
  const Amplitude det = a11 * a22 - a12 * a21;
  return {(b1 * a22 - a12 * b2) / det, (a11 * b2 - a21 * b1) / det};
}

Amplitude mechanical_update(const MeanFieldConfig& c, const LinearSolve& s,
                            Amplitude beta_m) {
  const double x = 2.0 * beta_m.real();
  const Amplitude rhs = -I * c.hopping * std::exp(-I * c.gauge_phase) * s.beta_a +
                        I * c.single_photon_coupling * std::norm(s.alpha_1) -
                        I * 2.0 * c.duffing * x * x * x;
  return rhs / (I * c.omega_m + 0.5 * c.mechanical_decay);
}

} // namespace

namespace {

// |sum of terms| / max(1, largest |term|).
double scaled_residual(std::initializer_list<Amplitude> terms) {
  Amplitude sum{0.0, 0.0};
  double scale = 1.0;
  for (const Amplitude& t : terms) {
    sum += t;
    scale = std::max(scale, std::abs(t));
  }
  return std::abs(sum) / scale;
}

} // namespace

double mean_field_residual(const MeanFieldConfig& c, const MeanFields& f) {
  const double x = 2.0 * f.beta_m.real();
  const double r1 = scaled_residual({
      (I * c.optical_detuning - 0.5 * c.optical_decay) * f.alpha_1,
      I * c.single_photon_coupling * f.alpha_1 * x,
      Amplitude{c.drive, 0.0},
      I * c.brillouin_coupling * f.beta_a,
  });
  const double r2 = scaled_residual({
      -(I * c.acoustic_detuning + 0.5 * c.acoustic_decay) * f.beta_a,
      -I * c.hopping * std::exp(I * c.gauge_phase) * f.beta_m,
      I * c.brillouin_coupling * f.alpha_1,
  });
  const double r3 = scaled_residual({
      -(I * c.omega_m + 0.5 * c.mechanical_decay) * f.beta_m,
      -I * c.hopping * std::exp(-I * c.gauge_phase) * f.beta_a,
      I * c.single_photon_coupling * std::norm(f.alpha_1),
      -I * 2.0 * c.duffing * x * x * x,
  });
  return std::max({r1, r2, r3});
}

MeanFields mean_field_fixed_point(const MeanFieldConfig& cfg) {
  if (!(cfg.damping > 0 && cfg.damping <= 1))
    throw DomainError("damping must lie in (0, 1]");
  if (!(cfg.optical_decay > 0 && cfg.acoustic_decay > 0 && cfg.mechanical_decay > 0))
    throw DomainError("decay rates must be > 0");
  if (cfg.max_iter < 1)
    throw DomainError("max_iter must be >= 1");

  Amplitude beta = cfg.initial_beta_m;
  double distance = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const LinearSolve s = solve_optical_acoustic(cfg, beta);
    const Amplitude target = mechanical_update(cfg, s, beta);
    const Amplitude next = (1.0 - cfg.damping) * beta + cfg.damping * target;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
      throw NoConvergence("mean-field iteration diverged", distance);
    distance = std::abs(next - beta) / std::max(1.0, std::abs(next));
    beta = next;
    if (distance < cfg.tol) {
      const LinearSolve fin = solve_optical_acoustic(cfg, beta);
      MeanFields f;
      f.alpha_1 = fin.alpha_1;
      f.beta_a = fin.beta_a;
      f.beta_m = beta;
      f.effective_optical_detuning =
          cfg.optical_detuning + 2.0 * cfg.single_photon_coupling * beta.real();
      f.optomech_coupling = cfg.single_photon_coupling * std::abs(f.alpha_1);
      f.duffing_shift = 24.0 * cfg.duffing * beta.real() * beta.real();
      f.iterations = it;
      f.residual = mean_field_residual(cfg, f);
      return f;
    }
  }
  std::ostringstream msg;
  msg << "mean-field iteration did not converge in " << cfg.max_iter
      << " iterations (last distance " << distance << ")";
  throw NoConvergence(msg.str(), distance);
}

} // namespace gauge_squeeze
