#include "gauge_squeeze/csv.hpp"
#include "gauge_squeeze/errors.hpp"
#include "gauge_squeeze/sweep.hpp"
#include "support/random_draws.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace gauge_squeeze;
using doctest::Approx;

namespace {

SweepSpec theta_spec(std::size_t count) {
  SweepSpec spec;
  spec.base = testing::optimum_point();
  spec.axis1 = {"theta", 0.0, 2 * std::numbers::pi, count};
  return spec;
}

SweepSpec grid_spec() {
  SweepSpec spec;
  spec.base = testing::optimum_point();
  spec.axis1 = {"G_a", 0.0, 0.2, 9};
  spec.axis2 = Axis{"Delta_a", 2.0, 5.0, 7};
  return spec;
}

std::string body_without_timestamp(const SweepDataset& ds) {
  std::ostringstream os;
  write_sweep_csv(os, ds);
  std::istringstream is(os.str());
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind("# timestamp", 0) != 0)
      out += line + "\n";
  return out;
}

bool same_optional(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

bool same_record(const SweepRecord& a, const SweepRecord& b) {
  return a.axis1 == b.axis1 && same_optional(a.axis2, b.axis2) && a.stable == b.stable &&
         same_optional(a.spectral_abscissa, b.spectral_abscissa) &&
         same_optional(a.var_q, b.var_q) && same_optional(a.squeeze_db, b.squeeze_db) &&
         same_optional(a.n_eff, b.n_eff) && same_optional(a.var_p, b.var_p) &&
         a.error == b.error;
}

} // namespace

TEST_CASE("axis values") {
  const Axis a{"G_a", 0.0, 0.2, 5};
  CHECK(a.value(0) == 0.0);
  CHECK(a.value(2) == Approx(0.1));
  CHECK(a.value(4) == 0.2);
}

TEST_CASE("spec validation") {
  SweepSpec spec = theta_spec(5);
  CHECK_NOTHROW(validate(spec));
  spec.axis1.count = 1;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = theta_spec(5);
  spec.axis1.name = "nope";
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = theta_spec(5);
  spec.axis1.max = spec.axis1.min;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = theta_spec(5);
  spec.axis2 = Axis{"theta", 0, 1, 3};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = theta_spec(5);
  spec.observables.clear();
  CHECK_THROWS_AS(validate(spec), ConfigError);
}

TEST_CASE("degenerate sweep gives identical records") {
  SweepSpec spec;
  spec.base = testing::optimum_point();
  spec.axis1 = {"G_a", 0.124, std::nextafter(0.124, 1.0), 2};
  const SweepDataset ds = run_sweep(spec);
  REQUIRE(ds.records.size() == 2);
  const auto& a = ds.records[0];
  const auto& b = ds.records[1];
  CHECK(a.stable == b.stable);
  CHECK(*a.var_q == Approx(*b.var_q).epsilon(1e-12));
  CHECK(*a.squeeze_db == Approx(*b.squeeze_db).epsilon(1e-12));
  CHECK(*a.n_eff == Approx(*b.n_eff).epsilon(1e-12));
}

TEST_CASE("record count and row-major order") {
  const SweepDataset ds = run_sweep(grid_spec());
  CHECK(ds.records.size() == 9 * 7);
  CHECK(ds.count1 == 9);
  CHECK(ds.count2 == 7);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const auto& r = ds.records[i * 7 + j];
      CHECK(r.axis1 == ds.records[i * 7].axis1);
      CHECK(*r.axis2 == ds.records[j].axis2);
    }
}

TEST_CASE("parallel and serial sweeps agree exactly") {
  const SweepSpec spec = grid_spec();
  const SweepDataset ser = run_sweep_serial(spec);
  for (int threads : {1, 2, 3, 8}) {
    const SweepDataset par = run_sweep(spec, ExecutionOptions{threads});
    REQUIRE(par.records.size() == ser.records.size());
    for (std::size_t k = 0; k < ser.records.size(); ++k)
      CHECK(same_record(par.records[k], ser.records[k]));
    CHECK(body_without_timestamp(par) == body_without_timestamp(ser));
  }
}

TEST_CASE("CSV determinism") {
  const SweepSpec spec = theta_spec(17);
  CHECK(body_without_timestamp(run_sweep(spec)) == body_without_timestamp(run_sweep(spec)));
}

TEST_CASE("CSV layout") {
  SweepSpec spec = theta_spec(3);
  spec.observables = {Observable::n_eff, Observable::var_q};
  const SweepDataset ds = run_sweep(spec);
  std::ostringstream os;
  write_sweep_csv(os, ds);
  const std::string text = os.str();
  CHECK(text.rfind("# gauge-squeeze v" + version_string() + "\n", 0) == 0);
  // Canonical column order, regardless of the requested order.
  CHECK(text.find("\naxis1,var_q,n_eff\n") != std::string::npos);
  CHECK(text.find("# param_hash = ") != std::string::npos);
  CHECK(text.find("# timestamp = ") != std::string::npos);
  CHECK(text.find("NaN") == std::string::npos);
  CHECK(text.find("nan") == std::string::npos);
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.0, 0.1, 1.0 / 3.0, -2.5e-17, 123456789.125, std::numbers::pi})
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  CHECK(format_number(0.5) == "0.5");
  CHECK_THROWS_AS(format_number(std::nan("")), NonFiniteState);
  CHECK_THROWS_AS(format_number(HUGE_VAL), NonFiniteState);
}

TEST_CASE("unstable points keep their slot with null observables") {
  // Blue-sideband driving amplifies once G_m outgrows the decay rates.
  SweepSpec spec;
  spec.base = testing::optimum_point();
  spec.base.optical_detuning = 3.5;
  spec.base.optomech_coupling = 0.0;
  spec.axis1 = {"G_m", 0.0, 0.4, 5};
  const SweepDataset ds = run_sweep(spec);
  REQUIRE(ds.records.size() == 5);
  const SweepRecord& last = ds.records.back();
  CHECK_FALSE(last.stable);
  CHECK(last.spectral_abscissa.has_value());
  CHECK(*last.spectral_abscissa > 0);
  CHECK_FALSE(last.var_q.has_value());
  CHECK_FALSE(last.squeeze_db.has_value());
  CHECK(last.value(Observable::stable) == 0.0);
  CHECK(ds.records.front().stable);
  CHECK(ds.records.front().value(Observable::stable) == 1.0);

  std::ostringstream os;
  write_sweep_csv(os, ds);
  CHECK(os.str().find("\n0.4,,,,,false,") != std::string::npos);
}

TEST_CASE("CSV read-back") {
  const SweepDataset ds = run_sweep(grid_spec());
  std::stringstream ss;
  write_sweep_csv(ss, ds);
  const SweepDataset back = read_sweep_csv(ss);
  CHECK(back.axis1_name == "G_a");
  CHECK(back.axis2_name == "Delta_a");
  CHECK(back.count1 == 9);
  CHECK(back.count2 == 7);
  CHECK(back.meta.param_hash == ds.meta.param_hash);
  REQUIRE(back.records.size() == ds.records.size());
  for (std::size_t k = 0; k < ds.records.size(); ++k)
    CHECK(same_optional(back.records[k].squeeze_db, ds.records[k].squeeze_db));

  std::istringstream junk("axis1,var_q\n1,2,3\n");
  CHECK_THROWS(read_sweep_csv(junk));
}

TEST_CASE("unwritable output names the path") {
  const std::string path = "/nonexistent-dir/out.csv";
  try {
    write_sweep_csv(path, run_sweep(theta_spec(2)));
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }
}

TEST_CASE("optimum search") {
  const SweepDataset ds = run_sweep(theta_spec(9));
  const Optimum best = find_optimum(ds, Observable::squeeze_db);
  // Peaks sit at (n + 1/2) pi.
  CHECK(std::abs(std::cos(best.axis1)) < 1e-12);
  const Optimum worst = find_optimum(ds, Observable::squeeze_db, Goal::minimize);
  CHECK(std::abs(std::sin(worst.axis1)) < 1e-12);

  // All-equal values resolve to the first grid point.
  SweepDataset flat = ds;
  for (auto& r : flat.records)
    r.squeeze_db = 1.0;
  CHECK(find_optimum(flat, Observable::squeeze_db).index == 0);
  CHECK(find_optimum(flat, Observable::squeeze_db, Goal::minimize).index == 0);

  SweepDataset none = ds;
  for (auto& r : none.records) {
    r.stable = false;
    r.squeeze_db.reset();
  }
  CHECK_THROWS_AS(find_optimum(none, Observable::squeeze_db), NoStablePoints);
}

TEST_CASE("gauge phase is 2 pi periodic across a sweep") {
  const SweepDataset ds = run_sweep(theta_spec(9));
  const auto& first = ds.records.front();
  const auto& last = ds.records.back();
  CHECK(*last.squeeze_db == Approx(*first.squeeze_db).epsilon(1e-12));
  CHECK(*last.n_eff == Approx(*first.n_eff).epsilon(1e-12));
}

TEST_CASE("thread cap from the environment") {
  CHECK(worker_count(3) >= 1);
  setenv("GAUGE_SQUEEZE_THREADS", "2", 1);
  CHECK(worker_count(0) <= 2);
  CHECK(worker_count(8) == 2);
  CHECK(worker_count(1) == 1);
  setenv("GAUGE_SQUEEZE_THREADS", "zero", 1);
  CHECK_THROWS_AS(worker_count(0), ConfigError);
  setenv("GAUGE_SQUEEZE_THREADS", "0", 1);
  CHECK_THROWS_AS(worker_count(0), ConfigError);
  unsetenv("GAUGE_SQUEEZE_THREADS");
}

TEST_CASE("dynamics with no noise from the origin stays at zero") {
  const SystemParams p = testing::optimum_point();
  const EffectiveModel eff = effective_model(p);
  const VarianceSeries s = variance_series(build_drift(eff, p), DiffusionMatrix{},
                                           CovarianceMatrix{}, eff.squeezing, 2.0, 0.01);
  CHECK(s.times.size() > 2);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    CHECK(s.var_q[k] == 0.0);
    CHECK(s.var_p[k] == 0.0);
  }
}

TEST_CASE("thermal initial state") {
  const double r = 0.3;
  const CovarianceMatrix v0 = thermal_initial_state(100, r);
  CHECK(v0.v(0, 0) == 0.5);
  CHECK(v0.v(2, 2) == 0.5);
  CHECK(position_variance(v0, r) == Approx(100.5));
  CHECK(momentum_variance(v0, r) == Approx(100.5));
}

TEST_CASE("dynamics experiment at the optimum") {
  DynamicsConfig cfg;
  cfg.params = testing::optimum_point();
  cfg.t_end = 50.0;
  cfg.store_every = 100;
  cfg.wigner_points = 41;
  const DynamicsResult res = run_dynamics_experiment(cfg);
  CHECK(res.stability.stable);
  CHECK(res.series.times.back() == Approx(50.0));
  CHECK(res.wigner.q_axis.size() == 41);
  CHECK(res.final_state.var_q == Approx(res.series.var_q.back()).epsilon(1e-14));

  cfg.params.optical_detuning = 3.5;
  CHECK_THROWS_AS(run_dynamics_experiment(cfg), UnstableSystem);
}
