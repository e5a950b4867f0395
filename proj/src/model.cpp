#include "gauge_squeeze/model.hpp"

#include "gauge_squeeze/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace gauge_squeeze {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok)
    throw DomainError("invalid system parameters: " + what);
}

} // namespace

void validate(const SystemParams& p) {
  for (const auto& f : param_fields())
    require(std::isfinite(p.*f.member), std::string(f.name) + " is not finite");
  if (p.optical_detuning)
    require(std::isfinite(*p.optical_detuning), "Delta_tilde is not finite");
  require(p.omega_m > 0, "omega_m must be > 0");
  require(p.optical_decay > 0, "kappa must be > 0");
  require(p.acoustic_decay > 0, "gamma_a must be > 0");
  require(p.mechanical_decay > 0, "gamma_m must be > 0");
  require(p.thermal_occupation >= 0, "n_th must be >= 0");
  require(p.duffing >= 0, "eta must be >= 0");
  require(p.optomech_coupling >= 0, "G_m must be >= 0");
  require(p.brillouin_coupling >= 0, "G_a must be >= 0");
  require(p.hopping >= 0, "J_m must be >= 0");
}

double squeezing_parameter(double duffing_shift, double omega_m) {
  const double arg = 1.0 + 2.0 * duffing_shift / omega_m;
  if (!(arg > 0.0) || !std::isfinite(arg))
    throw DomainError("squeezing parameter undefined: 1 + 2*Lambda/omega_m = " +
                      std::to_string(arg));
  return 0.25 * std::log(arg);
}

double mean_field_for_shift(double duffing_shift, double duffing) {
  if (duffing_shift < 0)
    throw DomainError("Lambda must be >= 0 to be realized by a real mean field");
  if (duffing_shift == 0)
    return 0.0;
  if (!(duffing > 0))
    throw DomainError("Lambda > 0 requires eta > 0");
  return std::sqrt(duffing_shift / (24.0 * duffing));
}

EffectiveModel effective_model(const SystemParams& p) {
  validate(p);
  EffectiveModel eff;
  const double beta = p.mechanical_mean_field_re;
  eff.duffing_shift = 24.0 * p.duffing * beta * beta;
  eff.squeezing = squeezing_parameter(eff.duffing_shift, p.omega_m);
  eff.frequency = std::sqrt(p.omega_m * (p.omega_m + 2.0 * eff.duffing_shift));
  eff.optomech_coupling = p.optomech_coupling * std::exp(-eff.squeezing);
  eff.hopping = p.hopping * std::cosh(eff.squeezing);
  eff.optical_detuning = p.optical_detuning.value_or(-eff.frequency);
  return eff;
}

DriftMatrix build_drift(const EffectiveModel& eff, const SystemParams& p) {
  using namespace quad;
  const double half_kappa = 0.5 * p.optical_decay;
  const double half_ga = 0.5 * p.acoustic_decay;
  const double half_gm = 0.5 * p.mechanical_decay;
  const double det = eff.optical_detuning;
  const double ga = p.brillouin_coupling;
  const double gm2 = 2.0 * eff.optomech_coupling;
  const double js = eff.hopping * std::sin(p.gauge_phase);
  const double jc = eff.hopping * std::cos(p.gauge_phase);
  const double da = p.acoustic_detuning;
  const double wm = eff.frequency;

  DriftMatrix out;
  Mat6& m = out.m;
  // clang-format off
  m <<  -half_kappa, -det,         0.0,     -ga,      0.0,      0.0,
         det,        -half_kappa,  ga,       0.0,     gm2,      0.0,
         0.0,        -ga,         -half_ga,  da,      js,       jc,
         ga,          0.0,        -da,      -half_ga, -jc,      js,
         0.0,         0.0,        -js,       jc,     -half_gm,  wm,
         gm2,         0.0,        -jc,      -js,     -wm,      -half_gm;
  // clang-format on
  return out;
}

DiffusionMatrix build_diffusion(const SystemParams& p, double r) {
  const double thermal = 2.0 * p.thermal_occupation + 1.0;
  DiffusionMatrix out;
  out.d.diagonal() << 0.5 * p.optical_decay, 0.5 * p.optical_decay,
      0.5 * p.acoustic_decay, 0.5 * p.acoustic_decay,
      0.5 * p.mechanical_decay * std::exp(2.0 * r) * thermal,
      0.5 * p.mechanical_decay * std::exp(-2.0 * r) * thermal;
  return out;
}

namespace {

// Delta-correlated bath moments of one input operator c:
// <c c^dag>, <c^dag c>, <c c>.
struct BathMoments {
  double anti_normal;
  double normal;
  std::complex<double> anomalous;
};

// Symmetrized quadrature block 1/2 <z_i z_j + z_j z_i> with
// X = (c^dag + c)/sqrt2, Y = i(c^dag - c)/sqrt2.
Mat2 quadrature_moments(const BathMoments& b) {
  const std::complex<double> cc = b.anomalous;
  const std::complex<double> cdcd = std::conj(cc);
  const double sym = 0.5 * (b.anti_normal + b.normal);
  Mat2 out;
  out(0, 0) = sym + 0.5 * (cc + cdcd).real();
  out(1, 1) = sym - 0.5 * (cc + cdcd).real();
  // 1/2<XY + YX> = (i/2)(<c^dag c^dag> - <c c>)
  const double xy = (std::complex<double>(0, 0.5) * (cdcd - cc)).real();
  out(0, 1) = out(1, 0) = xy;
  return out;
}

} // namespace

DiffusionMatrix diffusion_from_noise_correlations(const SystemParams& p, double r) {
  const double n = p.thermal_occupation;
  const BathMoments vacuum{1.0, 0.0, {0.0, 0.0}};
  // Squeezed thermal bath seen by the Bogoliubov mode.
  const double occupation = n * std::cosh(2.0 * r) + std::sinh(r) * std::sinh(r);
  const BathMoments mech{occupation + 1.0, occupation,
                         {(n + 0.5) * std::sinh(2.0 * r), 0.0}};

  const std::array<std::pair<double, BathMoments>, 3> baths{{
      {p.optical_decay, vacuum},
      {p.acoustic_decay, vacuum},
      {p.mechanical_decay, mech},
  }};

  DiffusionMatrix out;
  for (int k = 0; k < 3; ++k) {
    const auto& [rate, moments] = baths[static_cast<std::size_t>(k)];
    out.d.block<2, 2>(2 * k, 2 * k) = rate * quadrature_moments(moments);
  }
  return out;
}

namespace {

constexpr std::array<ParamField, 13> kFields{{
    {"omega_m", &SystemParams::omega_m},
    {"g_m", &SystemParams::single_photon_coupling},
    {"kappa", &SystemParams::optical_decay},
    {"gamma_a", &SystemParams::acoustic_decay},
    {"gamma_m", &SystemParams::mechanical_decay},
    {"eta", &SystemParams::duffing},
    {"n_th", &SystemParams::thermal_occupation},
    {"G_m", &SystemParams::optomech_coupling},
    {"G_a", &SystemParams::brillouin_coupling},
    {"J_m", &SystemParams::hopping},
    {"theta", &SystemParams::gauge_phase},
    {"Delta_a", &SystemParams::acoustic_detuning},
    {"beta_m_re", &SystemParams::mechanical_mean_field_re},
}};

} // namespace

std::span<const ParamField> param_fields() { return kFields; }

double* param_slot(SystemParams& p, std::string_view name) {
  if (name == "Delta_tilde") {
    if (!p.optical_detuning)
      p.optical_detuning = 0.0;
    return &*p.optical_detuning;
  }
  for (const auto& f : kFields)
    if (f.name == name)
      return &(p.*f.member);
  return nullptr;
}

std::optional<double> param_value(const SystemParams& p, std::string_view name) {
  if (name == "Delta_tilde")
    return p.optical_detuning;
  for (const auto& f : kFields)
    if (f.name == name)
      return p.*f.member;
  return std::nullopt;
}

} // namespace gauge_squeeze
