#include "gauge_squeeze/gaussian_dynamics.hpp"

#include "gauge_squeeze/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace gauge_squeeze {

namespace {

constexpr int kVec = kModes * kModes;
using KronMat = Eigen::Matrix<double, kVec, kVec>;
using KronVec = Eigen::Matrix<double, kVec, 1>;

// Column-major vec: vec(M V + V M^T) = (I (x) M + M (x) I) vec(V).
KronMat lyapunov_operator(const Mat6& m) {
  KronMat op = KronMat::Zero();
  for (int j = 0; j < kModes; ++j)
    for (int l = 0; l < kModes; ++l) {
      // Block (j, l) of I (x) M is delta_jl M; of M (x) I is M_jl I.
      auto block = op.block<kModes, kModes>(j * kModes, l * kModes);
      if (j == l)
        block += m;
      block.diagonal().array() += m(j, l);
    }
  return op;
}

Mat6 covariance_rate(const Mat6& m, const Mat6& v, const Mat6& d) {
  return m * v + v * m.transpose() + d;
}

Mat6 rk4_step(const Mat6& m, const Mat6& d, const Mat6& v, double h) {
  const Mat6 k1 = covariance_rate(m, v, d);
  const Mat6 k2 = covariance_rate(m, v + 0.5 * h * k1, d);
  const Mat6 k3 = covariance_rate(m, v + 0.5 * h * k2, d);
  const Mat6 k4 = covariance_rate(m, v + h * k3, d);
  return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Frobenius norm that does not overflow for entries near the double limit.
double scaled_norm(const Mat6& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  if (!(peak > 0) || !std::isfinite(peak))
    return peak;
  return peak * (v / peak).norm();
}

Mat6 symmetrized(const Mat6& v) { return 0.5 * (v + v.transpose()); }

} // namespace

double lyapunov_residual(const Mat6& m, const Mat6& v, const Mat6& d) {
  const double res = covariance_rate(m, v, d).norm();
  const double scale = d.norm();
  return scale > 0 ? res / scale : res;
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& drift,
                                const DiffusionMatrix& diffusion,
                                const LyapunovOptions& opts) {
  if (!drift.m.allFinite() || !diffusion.d.allFinite())
    throw NonFiniteState("Lyapunov inputs contain non-finite entries");
  if (opts.check_stability) {
    const double abscissa = spectral_abscissa(drift.m);
    if (!(abscissa < -opts.tol_stab)) {
      std::ostringstream msg;
      msg << "drift matrix is not stable (spectral abscissa " << abscissa << ")";
      throw UnstableSystem(msg.str(), abscissa);
    }
  }

  const KronMat op = lyapunov_operator(drift.m);
  const Eigen::PartialPivLU<KronMat> lu(op);
  if (!(lu.rcond() > 1e-14))
    throw SingularSolve("Lyapunov operator is numerically singular (rcond " +
                        std::to_string(lu.rcond()) + ")");

  const KronVec rhs = -Eigen::Map<const KronVec>(diffusion.d.data());
  KronVec x = lu.solve(rhs);
  x += lu.solve(rhs - op * x);

  CovarianceMatrix out;
  out.v = symmetrized(Eigen::Map<const Mat6>(x.data()));
  // Finite inputs with a non-finite answer means an exactly zero pivot.
  if (!out.v.allFinite())
    throw SingularSolve("Lyapunov operator is singular (non-finite solution)");

  const double residual = lyapunov_residual(drift.m, out.v, diffusion.d);
  if (residual > opts.residual_tol) {
    std::ostringstream msg;
    msg << "Lyapunov residual " << residual << " exceeds " << opts.residual_tol;
    throw SingularSolve(msg.str());
  }
  return out;
}

CovarianceTrajectory evolve_covariance(const DriftMatrix& drift,
                                       const DiffusionMatrix& diffusion,
                                       const CovarianceMatrix& initial,
                                       double t_end, double dt,
                                       const IntegratorOptions& opts) {
  if (!(dt > 0) || !std::isfinite(dt))
    throw DomainError("time step must be positive");
  if (!(t_end >= 0) || !std::isfinite(t_end))
    throw DomainError("t_end must be non-negative");
  if (opts.store_every == 0)
    throw DomainError("store_every must be >= 1");

  const Mat6& m = drift.m;
  const Mat6& d = diffusion.d;
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;

  // Step-halving probe: compare a short run at h against the same interval
  // at h/2 before committing to the full integration.
  const std::size_t probe = std::min(steps, opts.halving_probe_steps);
  if (probe > 0) {
    Mat6 coarse = initial.v, fine = initial.v;
    for (std::size_t i = 0; i < probe; ++i) {
      coarse = rk4_step(m, d, coarse, h);
      fine = rk4_step(m, d, rk4_step(m, d, fine, 0.5 * h), 0.5 * h);
    }
    if (!coarse.allFinite() || !fine.allFinite())
      throw StepTooLarge("step-halving probe diverged at dt = " + std::to_string(h));
    const double scale =
        std::max({scaled_norm(fine), scaled_norm(initial.v), d.norm() * h * probe, 1e-300});
    const double discrepancy = scaled_norm(coarse - fine) / scale;
    if (!(discrepancy <= opts.halving_tol)) {
      std::ostringstream msg;
      msg << "step-halving discrepancy " << discrepancy << " exceeds "
          << opts.halving_tol << " at dt = " << h;
      throw StepTooLarge(msg.str());
    }
  }

  CovarianceTrajectory traj;
  const std::size_t samples = steps / opts.store_every + 2;
  traj.times.reserve(samples);
  traj.values.reserve(samples);

  Mat6 v = symmetrized(initial.v);
  traj.times.push_back(0.0);
  traj.values.push_back({v});
  for (std::size_t i = 1; i <= steps; ++i) {
    v = symmetrized(rk4_step(m, d, v, h));
    if (!v.allFinite())
      throw NonFiniteState("covariance became non-finite at t = " +
                           std::to_string(static_cast<double>(i) * h));
    if (i % opts.store_every == 0 || i == steps) {
      traj.times.push_back(static_cast<double>(i) * h);
      traj.values.push_back({v});
    }
  }
  return traj;
}

} // namespace gauge_squeeze
