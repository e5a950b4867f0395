#pragma once

#include "gauge_squeeze/types.hpp"

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace gauge_squeeze {

// Coefficients of det(sI - M), highest power first (leading 1).
using CharPoly = std::array<double, kModes + 1>;

CharPoly characteristic_polynomial(const Mat6& m);

struct RouthResult {
  bool stable = false;
  int sign_changes = 0;   // number of right-half-plane roots when regular
  bool degenerate = false; // a zero pivot appeared in the first column
  std::vector<double> first_column;
};

// Routh-Hurwitz test on a real polynomial given highest power first.
RouthResult routh_hurwitz(std::span<const double> coeffs);

Eigen::Matrix<std::complex<double>, kModes, 1> drift_eigenvalues(const Mat6& m);
double spectral_abscissa(const Mat6& m);

enum class StabilityMethod { eigenvalues, routh_hurwitz, both };
std::string_view to_string(StabilityMethod m);

struct StabilityOptions {
  double tol_stab = 1e-10;
  double borderline_margin = 1e-8;
};

struct StabilityReport {
  bool stable = false;
  double spectral_abscissa = 0.0;
  StabilityMethod method = StabilityMethod::both;
  bool borderline = false;
  bool routh_hurwitz_stable = false;
};

// Eigenvalue and Routh-Hurwitz verdicts are computed independently; a
// disagreement outside the borderline band raises MethodDisagreement.
StabilityReport stability_report(const DriftMatrix& drift,
                                 const StabilityOptions& opts = {});

} // namespace gauge_squeeze
