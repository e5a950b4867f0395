// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any
// criterion fails. Operating points use Lambda = 5.625 (omega_m' = 3.5).

#include "gauge_squeeze/errors.hpp"
#include "gauge_squeeze/gaussian_dynamics.hpp"
#include "gauge_squeeze/model.hpp"
#include "gauge_squeeze/observables.hpp"
#include "gauge_squeeze/stability.hpp"
#include "gauge_squeeze/sweep.hpp"
#include "support/random_draws.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace gauge_squeeze;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThreeDb = 3.0102999566398120; // 10 log10(2)

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SystemParams operating_point(double hopping) {
  SystemParams p = testing::optimum_point();
  p.hopping = hopping;
  return p;
}

SweepSpec coupling_detuning_grid(double hopping) {
  SweepSpec spec;
  spec.base = operating_point(hopping);
  spec.axis1 = {"G_a", 0.0, 0.2, 101};
  spec.axis2 = Axis{"Delta_a", 2.0, 5.0, 101};
  spec.observables = {Observable::squeeze_db, Observable::stable};
  return spec;
}

std::vector<double> column(const SweepDataset& ds, Observable o) {
  std::vector<double> out;
  out.reserve(ds.records.size());
  for (const auto& r : ds.records)
    out.push_back(r.value(o).value_or(std::nan("")));
  return out;
}

std::vector<std::size_t> interior_extrema(const std::vector<double>& v, bool maxima) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const bool hit = maxima ? (v[i] > v[i - 1] && v[i] >= v[i + 1])
                            : (v[i] < v[i - 1] && v[i] <= v[i + 1]);
    if (hit)
      idx.push_back(i);
  }
  return idx;
}

bool has_near(const std::vector<std::size_t>& idx, const Axis& axis, double target) {
  const double cell = (axis.max - axis.min) / static_cast<double>(axis.count - 1);
  return std::any_of(idx.begin(), idx.end(), [&](std::size_t i) {
    return std::abs(axis.value(i) - target) <= cell + 1e-12;
  });
}

double min_uncertainty_product = 1e300;

void track_uncertainty(const SweepDataset& ds) {
  for (const auto& r : ds.records)
    if (r.stable && r.var_q && r.var_p)
      min_uncertainty_product = std::min(min_uncertainty_product, *r.var_q * *r.var_p);
}

// ---------------------------------------------------------------------------

struct GridOptimum {
  Optimum best;
  double peak = 0.0;
};

GridOptimum criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepSpec spec = coupling_detuning_grid(0.1);
  spec.observables = {Observable::var_q, Observable::squeeze_db, Observable::var_p,
                      Observable::stable};
  const SweepDataset ds = run_sweep(spec);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  track_uncertainty(ds);
  const Optimum best = find_optimum(ds, Observable::squeeze_db);
  const bool ok = std::abs(*best.axis2 - 3.5) <= 0.2 && std::abs(best.axis1 - 0.124) <= 0.03 &&
                  best.value > kThreeDb && seconds <= 60.0;
  report(1, ok,
         fmt("squeezing optimum on the G_a x Delta_a grid: Delta_a = %.4f, G_a = %.4f, peak = %.4f dB, 101x101 in %.2f s",
             *best.axis2, best.axis1, best.value, seconds));
  return {best, best.value};
}

void criterion2() {
  SweepSpec spec;
  spec.base = operating_point(0.1);
  spec.axis1 = {"theta", 0.0, 2 * kPi, 201};
  spec.observables = {Observable::var_q, Observable::squeeze_db, Observable::n_eff,
                      Observable::var_p, Observable::stable};
  const SweepDataset ds = run_sweep(spec);
  track_uncertainty(ds);
  const auto db = column(ds, Observable::squeeze_db);
  const auto ne = column(ds, Observable::n_eff);
  const auto db_max = interior_extrema(db, true);
  const auto db_min = interior_extrema(db, false);
  const auto ne_min = interior_extrema(ne, false);
  const std::size_t n = db.size();

  const bool maxima = db_max.size() == 2 && has_near(db_max, spec.axis1, kPi / 2) &&
                      has_near(db_max, spec.axis1, 3 * kPi / 2);
  // theta = 0 and 2 pi are the sweep ends, so they count as minima when the
  // curve rises away from them.
  const bool minima = db_min.size() == 1 && has_near(db_min, spec.axis1, kPi) &&
                      db[0] < db[1] && db[n - 1] < db[n - 2];
  bool anti_phase = ne_min.size() == db_max.size();
  for (std::size_t k = 0; anti_phase && k < ne_min.size(); ++k)
    anti_phase = ne_min[k] + 1 >= db_max[k] && ne_min[k] <= db_max[k] + 1;

  report(2, maxima && minima && anti_phase,
         fmt("gauge-phase oscillation: dB maxima at theta/pi = %s, interior minima %zu (at %.3f pi), "
             "ends %.3f/%.3f dB, n_eff minima aligned = %s",
             [&] {
               std::string s;
               for (auto i : db_max)
                 s += fmt("%.3f ", spec.axis1.value(i) / kPi);
               return s;
             }()
                 .c_str(),
             db_min.size(), db_min.empty() ? 0.0 : spec.axis1.value(db_min[0]) / kPi, db[0],
             db[n - 1], anti_phase ? "yes" : "no"));
}

void criterion3(double peak_with_hopping) {
  const SweepDataset ds = run_sweep(coupling_detuning_grid(0.0));
  const Optimum best = find_optimum(ds, Observable::squeeze_db);
  const bool ok = peak_with_hopping > best.value && peak_with_hopping > kThreeDb &&
                  best.value < kThreeDb;
  report(3, ok,
         fmt("synthetic-magnetism gain: peak %.4f dB (J_m = 0.1) vs %.4f dB (J_m = 0, at G_a = "
             "%.4f, Delta_a = %.4f); J_m = 0 peak must stay below 3.0103 dB",
             peak_with_hopping, best.value, best.axis1, *best.axis2));
}

void criterion4(double delta_opt) {
  SystemParams p = operating_point(0.1);
  p.brillouin_coupling = 0.0;
  p.acoustic_detuning = delta_opt;
  const SweepRecord r = evaluate_point(p);
  const bool ok = r.stable && r.squeeze_db && *r.squeeze_db > 0.0;
  report(4, ok,
         fmt("BSBS-free squeezing: G_a = 0, Delta_a = %.4f -> %.4f dB", delta_opt,
             r.squeeze_db.value_or(std::nan(""))));
}

struct Plateau {
  double start = 0.0;
  double level = 0.0;
  double spread = 0.0;
};

// Plateau region: gamma_a >= 20 kappa.
Plateau gamma_a_curve(double hopping) {
  SweepSpec spec;
  spec.base = operating_point(hopping);
  spec.base.brillouin_coupling = 0.15;
  spec.base.optomech_coupling = 0.124;
  spec.axis1 = {"gamma_a", 0.01, 1.0, 201};
  spec.observables = {Observable::var_q, Observable::squeeze_db, Observable::var_p,
                      Observable::stable};
  const SweepDataset ds = run_sweep(spec);
  track_uncertainty(ds);
  const double edge = 20.0 * spec.base.optical_decay;
  double lo = 1e300, hi = -1e300, sum = 0.0;
  int count = 0;
  for (const auto& r : ds.records) {
    if (r.axis1 < edge || !r.squeeze_db)
      continue;
    lo = std::min(lo, *r.squeeze_db);
    hi = std::max(hi, *r.squeeze_db);
    sum += *r.squeeze_db;
    ++count;
  }
  return {ds.records.front().squeeze_db.value_or(std::nan("")), sum / count, hi - lo};
}

void criterion5() {
  const Plateau with = gamma_a_curve(0.1);
  const Plateau without = gamma_a_curve(0.0);
  constexpr double kFlat = 0.5; // dB spread allowed across the plateau
  auto shaped = [&](const Plateau& c) { return c.start < c.level && c.spread <= kFlat; };
  const bool ok = shaped(with) && with.level >= 4.0 && with.level <= 6.0 && shaped(without) &&
                  without.level < kThreeDb;
  report(5, ok,
         fmt("acoustic-decay plateau: J_m = 0.1 rises %.3f -> %.3f dB (spread %.3f); J_m = 0 rises "
             "%.3f -> %.3f dB (spread %.3f), must plateau below 3.0103 dB",
             with.start, with.level, with.spread, without.start, without.level, without.spread));
}

struct ThermalCurve {
  bool non_increasing = true;
  double last_above_3db = -1.0; // largest n_th with > 3 dB, -1 if none
};

ThermalCurve thermal_curve(double hopping, double brillouin) {
  SweepSpec spec;
  spec.base = operating_point(hopping);
  spec.base.brillouin_coupling = brillouin;
  spec.axis1 = {"n_th", 0.0, 500.0, 201};
  spec.observables = {Observable::var_q, Observable::squeeze_db, Observable::var_p,
                      Observable::stable};
  const SweepDataset ds = run_sweep(spec);
  track_uncertainty(ds);
  ThermalCurve c;
  double prev = 1e300;
  for (const auto& r : ds.records) {
    const double v = r.squeeze_db.value_or(-1e300);
    c.non_increasing = c.non_increasing && v <= prev + 1e-12;
    prev = v;
    if (v > kThreeDb)
      c.last_above_3db = r.axis1;
  }
  return c;
}

void criterion6() {
  const ThermalCurve a = thermal_curve(0.1, 0.124);
  const ThermalCurve b = thermal_curve(0.0, 0.124);
  const ThermalCurve c = thermal_curve(0.1, 0.0);
  const ThermalCurve d = thermal_curve(0.0, 0.0);
  const bool monotone = a.non_increasing && b.non_increasing && c.non_increasing &&
                        d.non_increasing;
  const bool wider = c.last_above_3db > d.last_above_3db;
  report(6, monotone && wider,
         fmt("thermal robustness: non-increasing = %s; >3 dB up to n_th = %.1f (J_m = 0.1, "
             "G_a = 0) vs %.1f (J_m = 0, G_a = 0)",
             monotone ? "yes" : "no", c.last_above_3db, d.last_above_3db));
}

MechanicalState long_time_state(double theta) {
  DynamicsConfig cfg;
  cfg.params = operating_point(0.1);
  cfg.params.gauge_phase = theta;
  const EffectiveModel eff = effective_model(cfg.params);
  const double abscissa = spectral_abscissa(build_drift(eff, cfg.params).m);
  cfg.t_end = 30.0 / std::abs(abscissa);
  cfg.store_every = 1'000'000;
  cfg.wigner_points = 41;
  return run_dynamics_experiment(cfg).final_state;
}

void criterion7() {
  const MechanicalState half = long_time_state(kPi / 2);
  const MechanicalState zero = long_time_state(0.0);
  const bool ok = half.var_q < 0.5 && 0.5 < half.var_p && zero.var_q >= 0.5 &&
                  zero.var_q < zero.var_p;
  report(7, ok,
         fmt("long-time variances: theta = pi/2 var_q = %.4f, var_p = %.4f; theta = 0 var_q = "
             "%.4f (needs >= 0.5), var_p = %.4f",
             half.var_q, half.var_p, zero.var_q, zero.var_p));
}

// ---------------------------------------------------------------------------

struct System {
  SystemParams params;
  EffectiveModel eff;
  DriftMatrix drift;
  DiffusionMatrix diffusion;
};

System assemble(const SystemParams& p) {
  System s{p, effective_model(p), {}, {}};
  s.drift = build_drift(s.eff, p);
  s.diffusion = build_diffusion(p, s.eff.squeezing);
  return s;
}

void criterion8() {
  std::mt19937_64 rng(20240611);

  // (a) + (e): Lyapunov residual and the uncertainty bound.
  int a_ok = 0;
  double worst_residual = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const System s = assemble(testing::random_stable_params(rng));
    const CovarianceMatrix v = solve_lyapunov(s.drift, s.diffusion);
    const double res = lyapunov_residual(s.drift.m, v.v, s.diffusion.d);
    worst_residual = std::max(worst_residual, res);
    a_ok += res <= 1e-10;
    const MechanicalState m = mechanical_state(v, s.eff.squeezing);
    min_uncertainty_product = std::min(min_uncertainty_product, m.var_q * m.var_p);
  }

  // (b): RK4 long-time limit.
  int b_ok = 0;
  double worst_rk4 = 0.0;
  for (int k = 0; k < 100; ++k) {
    const System s = assemble(testing::random_stable_params(rng, 0.02));
    const CovarianceMatrix v = solve_lyapunov(s.drift, s.diffusion);
    IntegratorOptions opts;
    opts.store_every = 1'000'000'000;
    const double t_end = 12.0 / std::abs(spectral_abscissa(s.drift.m));
    const auto traj = evolve_covariance(s.drift, s.diffusion, CovarianceMatrix{}, t_end, 0.01, opts);
    const double rel = (traj.values.back().v - v.v).norm() / v.v.norm();
    worst_rk4 = std::max(worst_rk4, rel);
    b_ok += rel <= 1e-6;
  }

  // (c): eigenvalue vs Routh-Hurwitz verdicts.
  int c_checked = 0, c_agree = 0, c_borderline = 0;
  for (int k = 0; k < 1000; ++k) {
    const System s = assemble(testing::random_params(rng));
    const double abscissa = spectral_abscissa(s.drift.m);
    if (std::abs(abscissa) <= 1e-8) {
      ++c_borderline;
      continue;
    }
    ++c_checked;
    const RouthResult rh = routh_hurwitz(characteristic_polynomial(s.drift.m));
    c_agree += rh.stable == (abscissa < 0);
  }

  // (d): diffusion from the bath correlators.
  int d_ok = 0;
  for (int k = 0; k < 1000; ++k) {
    const SystemParams p = testing::random_params(rng);
    const double r = effective_model(p).squeezing;
    const Mat6 a = build_diffusion(p, r).d;
    const Mat6 b = diffusion_from_noise_correlations(p, r).d;
    bool same = true;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        same = same && std::abs(a(i, j) - b(i, j)) <= 1e-14 * std::abs(a(i, j));
    d_ok += same;
  }

  // (f): decoupled oscillator closed form.
  double worst_closed = 0.0;
  for (int k = 0; k < 200; ++k) {
    SystemParams p = testing::random_params(rng);
    p.optomech_coupling = p.brillouin_coupling = p.hopping = 0.0;
    const System s = assemble(p);
    const Mat2 got = solve_lyapunov(s.drift, s.diffusion).v.block<2, 2>(4, 4);
    const double g = p.mechanical_decay, w = s.eff.frequency;
    const double d1 = s.diffusion.d(4, 4), d2 = s.diffusion.d(5, 5);
    const double sum = (d1 + d2) / g;
    const double diff = g * (d1 - d2) / (g * g + 4 * w * w);
    const Mat2 ref{{0.5 * (sum + diff), -w * diff / g}, {-w * diff / g, 0.5 * (sum - diff)}};
    worst_closed = std::max(worst_closed, (got - ref).cwiseAbs().maxCoeff() /
                                              ref.cwiseAbs().maxCoeff());
  }

  const bool a = a_ok == 1000;
  const bool b = b_ok == 100;
  const bool c = c_agree == c_checked && c_checked >= 990;
  const bool d = d_ok == 1000;
  const bool e = min_uncertainty_product >= 0.25 - 1e-9;
  const bool f = worst_closed <= 1e-12;
  report(8, a && b && c && d && e && f,
         fmt("property suite: (a) %d/1000 residual <= 1e-10 (worst %.2e); (b) %d/100 RK4 within "
             "1e-6 (worst %.2e); (c) %d/%d verdicts agree, %d borderline; (d) %d/1000 diffusion "
             "identities; (e) min var_q*var_p = %.6f; (f) closed form worst %.2e",
             a_ok, worst_residual, b_ok, worst_rk4, c_agree, c_checked, c_borderline, d_ok,
             min_uncertainty_product, worst_closed));
}

template <class F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    report(id, false, std::string("raised: ") + e.what());
  }
}

} // namespace

int main() {
  GridOptimum grid{};
  guarded(1, [&] { grid = criterion1(); });
  guarded(2, criterion2);
  guarded(3, [&] { criterion3(grid.peak); });
  guarded(4, [&] { criterion4(grid.best.axis2.value_or(3.5)); });
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
