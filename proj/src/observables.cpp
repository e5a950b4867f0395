#include "gauge_squeeze/observables.hpp"

#include "gauge_squeeze/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gauge_squeeze {

Mat2 lab_frame_block(const CovarianceMatrix& cov, double r) {
  const Eigen::Vector2d scale(std::exp(-r), std::exp(r));
  const Mat2 block = cov.v.block<2, 2>(quad::Xbm, quad::Xbm);
  return scale.asDiagonal() * block * scale.asDiagonal();
}

double position_variance(const CovarianceMatrix& cov, double r) {
  return cov.v(quad::Xbm, quad::Xbm) * std::exp(-2.0 * r);
}

double momentum_variance(const CovarianceMatrix& cov, double r) {
  return cov.v(quad::Ybm, quad::Ybm) * std::exp(2.0 * r);
}

double variance_db(double var_q) {
  if (!(var_q > 0) || !std::isfinite(var_q))
    throw DomainError("variance must be positive for dB conversion");
  return -10.0 * std::log10(var_q / kZeroPointVariance);
}

double effective_phonon_number(const CovarianceMatrix& cov, double r) {
  const double n =
      0.5 * (position_variance(cov, r) + momentum_variance(cov, r) - 1.0);
  if (n < -1e-9) {
    std::ostringstream msg;
    msg << "effective phonon number " << n << " is negative";
    throw Unphysical(msg.str());
  }
  return n < 0 ? 0.0 : n;
}

MechanicalState mechanical_state(const CovarianceMatrix& cov, double r) {
  MechanicalState s;
  s.v_lab = lab_frame_block(cov, r);
  s.var_q = s.v_lab(0, 0);
  s.var_p = s.v_lab(1, 1);
  s.squeeze_db = variance_db(s.var_q);
  s.n_eff = effective_phonon_number(cov, r);
  return s;
}

namespace {

struct GaussianKernel {
  Mat2 inverse;
  double peak;
};

GaussianKernel make_kernel(const Mat2& v) {
  const double det = v.determinant();
  if (!(det > 1e-300))
    throw SingularCovariance("mechanical covariance is singular (det " +
                             std::to_string(det) + ")");
  return {v.inverse(), 1.0 / (2.0 * std::numbers::pi * std::sqrt(det))};
}

inline double evaluate(const GaussianKernel& k, double q, double p) {
  const double quad_form = k.inverse(0, 0) * q * q +
                           2.0 * k.inverse(0, 1) * q * p +
                           k.inverse(1, 1) * p * p;
  return k.peak * std::exp(-0.5 * quad_form);
}

// Trapezoidal integral over the (possibly non-uniform) grid.
double integrate(const WignerGrid& g) {
  auto weights = [](const std::vector<double>& x) {
    std::vector<double> w(x.size(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double h = 0.5 * (x[i + 1] - x[i]);
      w[i] += h;
      w[i + 1] += h;
    }
    return w;
  };
  const auto wq = weights(g.q_axis);
  const auto wp = weights(g.p_axis);
  double total = 0.0;
  for (std::size_t i = 0; i < wq.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < wp.size(); ++j)
      row += wp[j] * g.at(i, j);
    total += wq[i] * row;
  }
  return total;
}

WignerGrid prepare(const std::vector<double>& q_axis, const std::vector<double>& p_axis) {
  WignerGrid g;
  g.q_axis = q_axis;
  g.p_axis = p_axis;
  g.w.assign(q_axis.size() * p_axis.size(), 0.0);
  return g;
}

} // namespace

WignerGrid wigner_grid_serial(const Mat2& v_lab, const std::vector<double>& q_axis,
                              const std::vector<double>& p_axis) {
  const GaussianKernel k = make_kernel(v_lab);
  WignerGrid g = prepare(q_axis, p_axis);
  for (std::size_t i = 0; i < q_axis.size(); ++i)
    for (std::size_t j = 0; j < p_axis.size(); ++j)
      g.w[i * p_axis.size() + j] = evaluate(k, q_axis[i], p_axis[j]);
  g.normalization_check = integrate(g);
  return g;
}

WignerGrid wigner_grid(const Mat2& v_lab, const std::vector<double>& q_axis,
                       const std::vector<double>& p_axis) {
  const GaussianKernel k = make_kernel(v_lab);
  WignerGrid g = prepare(q_axis, p_axis);
  const auto rows = static_cast<std::ptrdiff_t>(q_axis.size());
  const std::size_t cols = p_axis.size();
  double* w = g.w.data();
  const double* q = q_axis.data();
  const double* p = p_axis.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const GaussianKernel local = k;
    double* row = w + static_cast<std::size_t>(i) * cols;
    const double qi = q[i];
    for (std::size_t j = 0; j < cols; ++j)
      row[j] = evaluate(local, qi, p[j]);
  }
  g.normalization_check = integrate(g);
  return g;
}

std::vector<double> default_wigner_axis(const Mat2& v_lab, std::size_t points,
                                        double extent) {
  if (points < 2)
    throw DomainError("Wigner axis needs at least two points");
  const double sigma = std::sqrt(std::max(v_lab(0, 0), v_lab(1, 1)));
  const double half = extent * sigma;
  std::vector<double> axis(points);
  for (std::size_t i = 0; i < points; ++i)
    axis[i] = -half + 2.0 * half * static_cast<double>(i) /
                          static_cast<double>(points - 1);
  return axis;
}

} // namespace gauge_squeeze
