#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace bf {

using cplx = std::complex<double>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CMatrix2 = Eigen::Matrix2cd;
using CMatrix4 = Eigen::Matrix4cd;
using RMatrix4 = Eigen::Matrix4d;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

}  // namespace bf
