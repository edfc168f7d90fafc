// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace qw {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Default tolerance for unitarity residuals.
inline constexpr double kDefaultTol = 1e-10;

namespace pauli {
inline Mat2 id() { return Mat2::Identity(); }
inline Mat2 x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline Mat2 y() {
  Mat2 m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}
inline Mat2 z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

/// exp(i t sigma_x) = cos t + i sin t sigma_x.
inline Mat2 exp_i_sigma_x(double t) {
  return std::cos(t) * pauli::id() + kI * std::sin(t) * pauli::x();
}

inline CMatrix scalar_matrix(cplx z) {
  CMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

/// Frobenius norm of A A^dagger - I.
inline double unitarity_defect(const CMatrix& a) {
  return (a * a.adjoint() - CMatrix::Identity(a.rows(), a.cols())).norm();
}

/// Wraps an angle into [-pi, pi).
inline double wrap_phase(double phi) {
  double w = std::fmod(phi + kPi, 2.0 * kPi);
  if (w < 0) w += 2.0 * kPi;
  return w - kPi;
}

/// Distance between two phases on the circle.
inline double phase_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

/// arccos with arguments clamped to [-1, 1]; excursions beyond `slack` are NaN.
inline double clamped_acos(double x, double slack = 1e-12) {
  if (x > 1.0 + slack || x < -1.0 - slack) return std::nan("");
  if (x > 1.0) x = 1.0;
  if (x < -1.0) x = -1.0;
  return std::acos(x);
}

}  // namespace qw
