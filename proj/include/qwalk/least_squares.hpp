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

#include <functional>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

namespace qw {

using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;
using JacobianFn = std::function<void(const Eigen::VectorXd& x, Eigen::MatrixXd& j)>;

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_norm = std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

namespace detail {

struct LmFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ResidualFn* f;
  const JacobianFn* jac;
  int n, m, pad;

  int inputs() const { return n; }
  int values() const { return m + pad; }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    Eigen::VectorXd r(m);
    (*f)(x, r);
    fvec.setZero(m + pad);
    fvec.head(m) = r;
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& fjac) const {
    fjac.setZero(m + pad, n);
    if (*jac) {
      Eigen::MatrixXd j(m, n);
      (*jac)(x, j);
      fjac.topRows(m) = j;
      return 0;
    }
    Eigen::VectorXd r0(m), r1(m);
    (*f)(x, r0);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
      xp[i] = x[i] + h;
      (*f)(xp, r1);
      Eigen::VectorXd rp = r1;
      xp[i] = x[i] - h;
      (*f)(xp, r1);
      fjac.col(i).head(m) = (rp - r1) / (2.0 * h);
      xp[i] = x[i];
    }
    return 0;
  }
};

}  // namespace detail

/// Levenberg-Marquardt on sum r_i(x)^2. Without a Jacobian, central
/// differences are used.
inline LeastSquaresResult minimize_least_squares(const ResidualFn& f, int num_residuals, Eigen::VectorXd x0,
                                                 const JacobianFn& jac = {}, int max_evaluations = 2000) {
  const int n = static_cast<int>(x0.size());
  detail::LmFunctor functor{&f, &jac, n, num_residuals, std::max(0, n - num_residuals)};
  Eigen::LevenbergMarquardt<detail::LmFunctor> lm(functor);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.gtol = 0.0;
  lm.parameters.maxfev = max_evaluations;
  lm.minimize(x0);
  LeastSquaresResult out;
  Eigen::VectorXd r(num_residuals);
  f(x0, r);
  out.x = std::move(x0);
  out.residual_norm = r.norm();
  out.evaluations = static_cast<int>(lm.nfev);
  return out;
}

}  // namespace qw
