#include "gauge_squeeze/stability.hpp"

#include "gauge_squeeze/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gauge_squeeze {

CharPoly characteristic_polynomial(const Mat6& m) {
  // Faddeev-LeVerrier recursion in extended precision:
  //   M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k.
  using LMat = Eigen::Matrix<long double, kModes, kModes>;
  const LMat a = m.cast<long double>();
  std::array<long double, kModes + 1> c{};
  c[0] = 1.0L;
  LMat mk = LMat::Zero();
  for (int k = 1; k <= kModes; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(k - 1)] * LMat::Identity();
    c[static_cast<std::size_t>(k)] = -(a * mk).trace() / static_cast<long double>(k);
  }
  CharPoly out;
  std::transform(c.begin(), c.end(), out.begin(),
                 [](long double v) { return static_cast<double>(v); });
  return out;
}

RouthResult routh_hurwitz(std::span<const double> coeffs) {
  RouthResult res;
  if (coeffs.size() < 2)
    throw DomainError("Routh-Hurwitz needs a polynomial of degree >= 1");

  const std::size_t n = coeffs.size() - 1;
  const std::size_t width = n / 2 + 1;
  // Normalize the sign so the leading coefficient is positive.
  const long double lead = coeffs[0] < 0 ? -1.0L : 1.0L;

  std::vector<long double> prev(width, 0.0L), cur(width, 0.0L);
  for (std::size_t i = 0; i <= n; ++i) {
    auto& row = (i % 2 == 0) ? prev : cur;
    row[i / 2] = lead * coeffs[i];
  }

  res.first_column.push_back(static_cast<double>(prev[0]));
  res.first_column.push_back(static_cast<double>(cur[0]));
  for (std::size_t row = 2; row <= n; ++row) {
    if (cur[0] == 0.0L) {
      res.degenerate = true;
      break;
    }
    std::vector<long double> next(width, 0.0L);
    for (std::size_t j = 0; j + 1 < width; ++j)
      next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
    prev = std::move(cur);
    cur = std::move(next);
    res.first_column.push_back(static_cast<double>(cur[0]));
  }

  if (res.degenerate) {
    res.stable = false;
    return res;
  }
  for (std::size_t i = 1; i < res.first_column.size(); ++i)
    if ((res.first_column[i] > 0) != (res.first_column[i - 1] > 0))
      ++res.sign_changes;
  res.stable = std::all_of(res.first_column.begin(), res.first_column.end(),
                           [](double v) { return v > 0.0; });
  return res;
}

Eigen::Matrix<std::complex<double>, kModes, 1> drift_eigenvalues(const Mat6& m) {
  Eigen::EigenSolver<Mat6> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalue iteration did not converge");
  return solver.eigenvalues();
}

double spectral_abscissa(const Mat6& m) {
  if (!m.allFinite())
    throw NonFiniteState("drift matrix has non-finite entries");
  return drift_eigenvalues(m).real().maxCoeff();
}

std::string_view to_string(StabilityMethod m) {
  switch (m) {
  case StabilityMethod::eigenvalues:
    return "eigenvalues";
  case StabilityMethod::routh_hurwitz:
    return "routh-hurwitz";
  case StabilityMethod::both:
    return "eigenvalues+routh-hurwitz";
  }
  return "unknown";
}

StabilityReport stability_report(const DriftMatrix& drift,
                                 const StabilityOptions& opts) {
  StabilityReport rep;
  rep.spectral_abscissa = spectral_abscissa(drift.m);
  const bool eig_stable = rep.spectral_abscissa < -opts.tol_stab;

  const CharPoly poly = characteristic_polynomial(drift.m);
  const RouthResult routh = routh_hurwitz(poly);
  rep.routh_hurwitz_stable = routh.stable;

  rep.borderline = std::abs(rep.spectral_abscissa) <= opts.borderline_margin;
  if (eig_stable != routh.stable && !rep.borderline) {
    std::ostringstream msg;
    msg << "stability verdicts disagree: spectral abscissa "
        << rep.spectral_abscissa << " but Routh-Hurwitz says "
        << (routh.stable ? "stable" : "unstable");
    throw MethodDisagreement(msg.str());
  }
  rep.stable = eig_stable;
  rep.method = StabilityMethod::both;
  return rep;
}

} // namespace gauge_squeeze
