#pragma once

#include <Eigen/Dense>

namespace gauge_squeeze {

// Quadrature ordering used throughout: (X_a1, Y_a1, X_ba, Y_ba, X_bm, Y_bm).
inline constexpr int kModes = 6;

using Mat6 = Eigen::Matrix<double, kModes, kModes>;
using Mat2 = Eigen::Matrix2d;

namespace quad {
inline constexpr int Xa1 = 0;
inline constexpr int Ya1 = 1;
inline constexpr int Xba = 2;
inline constexpr int Yba = 3;
inline constexpr int Xbm = 4;
inline constexpr int Ybm = 5;
} // namespace quad

struct DriftMatrix {
  Mat6 m = Mat6::Zero();
};

struct DiffusionMatrix {
  Mat6 d = Mat6::Zero();
};

struct CovarianceMatrix {
  Mat6 v = Mat6::Zero();
};

} // namespace gauge_squeeze
