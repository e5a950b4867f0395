#pragma once

#include "gauge_squeeze/stability.hpp"
#include "gauge_squeeze/types.hpp"

#include <vector>

namespace gauge_squeeze {

struct LyapunovOptions {
  bool check_stability = true;
  double tol_stab = 1e-10;
  double residual_tol = 1e-10; // relative to ||D||_F
};

// Steady state of dV/dt = M V + V M^T + D, i.e. M V + V M^T = -D.
// Solved as (I (x) M + M (x) I) vec(V) = -vec(D) with partially pivoted LU
// plus one step of iterative refinement; the result is symmetrized.
CovarianceMatrix solve_lyapunov(const DriftMatrix& drift,
                                const DiffusionMatrix& diffusion,
                                const LyapunovOptions& opts = {});

// ||M V + V M^T + D||_F / ||D||_F (or the absolute norm when D = 0).
double lyapunov_residual(const Mat6& m, const Mat6& v, const Mat6& d);

struct CovarianceTrajectory {
  std::vector<double> times;
  std::vector<CovarianceMatrix> values;
};

struct IntegratorOptions {
  std::size_t store_every = 1; // keep one sample every N steps (and the last)
  double halving_tol = 1e-5;   // relative step-halving discrepancy
  std::size_t halving_probe_steps = 200;
};

// Fixed-step classical RK4 on the covariance equation of motion. The step is
// shrunk to t_end / ceil(t_end / dt) so that the last sample lands on t_end.
CovarianceTrajectory evolve_covariance(const DriftMatrix& drift,
                                       const DiffusionMatrix& diffusion,
                                       const CovarianceMatrix& initial,
                                       double t_end, double dt,
                                       const IntegratorOptions& opts = {});

} // namespace gauge_squeeze
