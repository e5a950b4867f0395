#pragma once

// Lab-frame mechanical observables from the squeezed-frame covariance.
// The Bogoliubov mode relates to the lab quadratures by
//   q_m = e^{-r} X_s,  p_m = e^{+r} Y_s,
// so the (X_bm, Y_bm) block is rescaled by S = diag(e^{-r}, e^{r}).

#include "gauge_squeeze/types.hpp"

#include <vector>

namespace gauge_squeeze {

inline constexpr double kZeroPointVariance = 0.5;

Mat2 lab_frame_block(const CovarianceMatrix& cov, double r);

double position_variance(const CovarianceMatrix& cov, double r);
double momentum_variance(const CovarianceMatrix& cov, double r);

// -10 log10(var / 1/2); DomainError for var <= 0.
double variance_db(double var_q);

// (V55 e^{-2r} + V66 e^{2r} - 1) / 2, tiny negatives clamped to zero.
// Unphysical if the value is below -1e-9.
double effective_phonon_number(const CovarianceMatrix& cov, double r);

struct MechanicalState {
  Mat2 v_lab = Mat2::Zero();
  double var_q = 0.0;
  double var_p = 0.0;
  double squeeze_db = 0.0;
  double n_eff = 0.0;
};

MechanicalState mechanical_state(const CovarianceMatrix& cov, double r);

struct WignerGrid {
  std::vector<double> q_axis;
  std::vector<double> p_axis;
  // Row-major, w[i * p_axis.size() + j] is W(q_axis[i], p_axis[j]).
  std::vector<double> w;
  double normalization_check = 0.0;

  double at(std::size_t iq, std::size_t ip) const { return w[iq * p_axis.size() + ip]; }
};

// Gaussian Wigner function W(u) = exp(-u^T V^-1 u / 2) / (2 pi sqrt(det V)),
// rows evaluated in parallel. SingularCovariance if det V <= 1e-300.
WignerGrid wigner_grid(const Mat2& v_lab, const std::vector<double>& q_axis,
                       const std::vector<double>& p_axis);

// Serial reference used to check the parallel kernel.
WignerGrid wigner_grid_serial(const Mat2& v_lab, const std::vector<double>& q_axis,
                              const std::vector<double>& p_axis);

// Symmetric axes of `points` samples spanning +-extent * max(sqrt var_q, sqrt var_p).
std::vector<double> default_wigner_axis(const Mat2& v_lab, std::size_t points = 201,
                                        double extent = 5.0);

} // namespace gauge_squeeze
