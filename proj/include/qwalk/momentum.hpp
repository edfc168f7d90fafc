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

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qwalk/lattice.hpp"
#include "qwalk/walk.hpp"

namespace qw {

struct MomentumTerm {
  std::vector<std::int64_t> shift;
  CMatrix coeff;
};

/// k -> A_k = sum_h exp(-i k.h) C_h over the Brillouin zone of Z^d.
class MomentumWalk {
 public:
  MomentumWalk() = default;
  MomentumWalk(int coin_dim, int dim, std::vector<MomentumTerm> terms)
      : coin_dim_(coin_dim), dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (static_cast<int>(t.shift.size()) != dim_) throw Error(ErrorCode::kDimensionMismatch, "shift arity");
      if (t.coeff.rows() != coin_dim_ || t.coeff.cols() != coin_dim_) {
        throw Error(ErrorCode::kDimensionMismatch, "coefficient size");
      }
    }
  }

  int coin_dim() const { return coin_dim_; }
  int dim() const { return dim_; }
  const std::vector<MomentumTerm>& terms() const { return terms_; }

  /// Coefficient at a shift; zero when absent.
  CMatrix coefficient(const std::vector<std::int64_t>& shift) const {
    CMatrix c = CMatrix::Zero(coin_dim_, coin_dim_);
    for (const auto& t : terms_) {
      if (t.shift == shift) c += t.coeff;
    }
    return c;
  }

  CMatrix at(std::span<const double> k) const {
    if (static_cast<int>(k.size()) != dim_) throw Error(ErrorCode::kDimensionMismatch, "wave-vector arity");
    CMatrix a = CMatrix::Zero(coin_dim_, coin_dim_);
    for (const auto& t : terms_) {
      double phase = 0.0;
      for (int i = 0; i < dim_; ++i) phase += k[i] * static_cast<double>(t.shift[i]);
      a += std::polar(1.0, -phase) * t.coeff;
    }
    return a;
  }
  CMatrix at(double k) const { return at(std::span<const double>(&k, 1)); }

  MomentumWalk scaled(cplx factor) const {
    auto out = *this;
    for (auto& t : out.terms_) t.coeff *= factor;
    return out;
  }

 private:
  int coin_dim_ = 1;
  int dim_ = 1;
  std::vector<MomentumTerm> terms_;
};

/// Momentum representation of a walk whose position space is Z^d.
inline MomentumWalk to_momentum(const QuantumWalk& walk) {
  const auto& fam = walk.graph().family();
  if (fam.kind() != FamilyKind::kFreeAbelian || fam.free_rank() < 1) {
    throw Error(ErrorCode::kFamilyMismatch, "momentum representation needs Z^d, got " + fam.tag());
  }
  std::vector<MomentumTerm> terms;
  for (std::size_t i = 0; i < walk.graph().size(); ++i) {
    terms.push_back({walk.graph().generators()[i].element.coords(), walk.transitions()[i]});
  }
  return MomentumWalk(walk.coin_dim(), fam.free_rank(), std::move(terms));
}

/// Uniform grid of `samples` points on [-pi, pi).
inline std::vector<double> brillouin_grid(int samples) {
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one k sample");
  std::vector<double> k(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) k[static_cast<std::size_t>(i)] = -kPi + 2.0 * kPi * i / samples;
  return k;
}

/// Global phase e^{i chi} with A_k / e^{i chi} in SU(2) for every k, when
/// det A_k is k-independent (s = 2 only). The sign of the square root is
/// chosen so the (0,0) entry of the h = +1 coefficient has nonnegative real
/// part (falling back to its trace, then to the h = 0 trace).
inline std::optional<cplx> su2_gauge(const MomentumWalk& mw, double tol = 1e-9) {
  if (mw.coin_dim() != 2 || mw.dim() != 1) return std::nullopt;
  const cplx det0 = mw.at(0.0).determinant();
  if (std::abs(std::abs(det0) - 1.0) > tol) return std::nullopt;
  for (double k : brillouin_grid(17)) {
    if (std::abs(mw.at(k + 0.123).determinant() - det0) > tol) return std::nullopt;
  }
  cplx g = std::polar(1.0, std::arg(det0) / 2.0);
  const CMatrix cp = mw.coefficient({1});
  const CMatrix c0 = mw.coefficient({0});
  const double eps = 1e-12;
  double key = 0.0;
  if (std::abs(cp(0, 0)) > eps) key = (cp(0, 0) / g).real();
  else if (std::abs(cp.trace()) > eps) key = (cp.trace() / g).real();
  else key = (c0.trace() / g).real();
  if (key < -eps) g = -g;
  return g;
}

/// Eigenphase omega in [0, pi] of an (approximately) SU(2) matrix; the
/// eigenvalues are exp(+-i omega). Uses atan2 of the traceless and trace parts.
inline double su2_angle(const Mat2& b) {
  const cplx a0 = 0.5 * b.trace();
  const double im = (b - a0 * Mat2::Identity()).norm() / std::sqrt(2.0);
  return std::atan2(im, a0.real());
}

/// Sorted eigenphases in [-pi, pi) of a square matrix.
inline std::vector<double> eigenphases(const CMatrix& a) {
  std::vector<double> ph;
  if (a.rows() == 1) {
    ph.push_back(wrap_phase(std::arg(a(0, 0))));
    return ph;
  }
  Eigen::ComplexEigenSolver<CMatrix> es(a, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ph.push_back(wrap_phase(std::arg(es.eigenvalues()[i])));
  std::sort(ph.begin(), ph.end());
  return ph;
}

struct DispersionData {
  std::vector<double> k;
  /// branches[r][i] = omega_r(k_i)
  std::vector<std::vector<double>> branches;
  /// Minimal distance between eigenvalues on the unit circle, per k.
  std::vector<double> gap;
  /// A_k = gauge * (SU(2) matrix) when `su2` is set; branches are then {+omega, -omega}.
  cplx gauge{1.0, 0.0};
  bool su2 = false;
};

namespace detail {
inline double min_eigen_gap(const std::vector<double>& phases) {
  double g = 2.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    for (std::size_t j = i + 1; j < phases.size(); ++j) {
      g = std::min(g, std::abs(std::polar(1.0, phases[i]) - std::polar(1.0, phases[j])));
    }
  }
  return g;
}
}  // namespace detail

/// Eigenphases at explicit wave numbers (d = 1).
inline DispersionData dispersion_at(const MomentumWalk& mw, const std::vector<double>& ks, double tol = kDefaultTol) {
  if (mw.dim() != 1) throw Error(ErrorCode::kDimensionMismatch, "dispersion sampling is one-dimensional");
  DispersionData d;
  d.k = ks;
  auto gauge = su2_gauge(mw);
  d.su2 = gauge.has_value();
  if (gauge) d.gauge = *gauge;
  d.branches.assign(static_cast<std::size_t>(mw.coin_dim()), std::vector<double>(ks.size()));
  d.gap.resize(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CMatrix a = mw.at(ks[i]);
    double defect = unitarity_defect(a);
    if (defect > tol) {
      throw Error(ErrorCode::kNotUnitary, "A_k defect " + std::to_string(defect) + " at k=" + std::to_string(ks[i]));
    }
    if (d.su2) {
      double w = su2_angle(a / d.gauge);
      d.branches[0][i] = w;
      d.branches[1][i] = -w;
      d.gap[i] = 2.0 * std::sin(w);
    } else {
      auto ph = eigenphases(a);
      for (std::size_t r = 0; r < ph.size(); ++r) d.branches[r][i] = ph[r];
      d.gap[i] = detail::min_eigen_gap(ph);
    }
  }
  return d;
}

inline DispersionData dispersion(const MomentumWalk& mw, int samples = 1024, double tol = kDefaultTol) {
  return dispersion_at(mw, brillouin_grid(samples), tol);
}

/// Reorders branches so each follows the previous k by minimal phase distance.
inline DispersionData track_branches(DispersionData d) {
  const std::size_t nb = d.branches.size();
  for (std::size_t i = 1; i < d.k.size(); ++i) {
    std::vector<double> cur(nb);
    for (std::size_t r = 0; r < nb; ++r) cur[r] = d.branches[r][i];
    std::vector<bool> used(nb, false);
    for (std::size_t r = 0; r < nb; ++r) {
      std::size_t best = nb;
      for (std::size_t q = 0; q < nb; ++q) {
        if (used[q]) continue;
        if (best == nb || phase_distance(cur[q], d.branches[r][i - 1]) < phase_distance(cur[best], d.branches[r][i - 1])) {
          best = q;
        }
      }
      used[best] = true;
      d.branches[r][i] = cur[best];
    }
  }
  return d;
}

struct DerivativeSamples {
  std::vector<double> k;
  std::vector<double> value;
  /// Stencil touches a band crossing; value is not a reliable derivative there.
  std::vector<bool> flagged;
};

namespace detail {
inline DerivativeSamples central_difference(const DispersionData& d, std::size_t branch, int order, double gap_tol) {
  if (branch >= d.branches.size()) throw Error(ErrorCode::kInvalidArgument, "branch index");
  const std::size_t n = d.k.size();
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "need at least three k samples");
  const double h = 2.0 * kPi / static_cast<double>(n);
  DerivativeSamples out;
  out.k = d.k;
  out.value.resize(n);
  out.flagged.resize(n);
  const auto& w = d.branches[branch];
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    double fwd = wrap_phase(w[ip] - w[i]);
    double bwd = wrap_phase(w[i] - w[im]);
    out.value[i] = order == 1 ? (fwd + bwd) / (2.0 * h) : (fwd - bwd) / (h * h);
    out.flagged[i] = d.gap[i] < gap_tol || d.gap[ip] < gap_tol || d.gap[im] < gap_tol;
  }
  return out;
}
}  // namespace detail

/// d omega / dk by central differences on the periodic grid.
inline DerivativeSamples group_velocity(const DispersionData& d, std::size_t branch = 0, double gap_tol = 1e-6) {
  return detail::central_difference(d, branch, 1, gap_tol);
}

/// d^2 omega / dk^2 by central differences on the periodic grid.
inline DerivativeSamples diffusion_coefficient(const DispersionData& d, std::size_t branch = 0, double gap_tol = 1e-6) {
  return detail::central_difference(d, branch, 2, gap_tol);
}

/// Group velocity of branch 0 at an arbitrary k with step h; nullopt near crossings.
inline std::optional<double> group_velocity_at(const MomentumWalk& mw, double k, double h = 1e-5, std::size_t branch = 0,
                                               double gap_tol = 1e-6) {
  auto d = track_branches(dispersion_at(mw, {k - h, k, k + h}, 1e-8));
  for (double g : d.gap) {
    if (g < gap_tol) return std::nullopt;
  }
  const auto& w = d.branches.at(branch);
  return (wrap_phase(w[1] - w[0]) + wrap_phase(w[2] - w[1])) / (2.0 * h);
}

namespace detail {
inline CayleyGraph line_graph(bool with_identity) {
  auto fam = GroupFamily::free_abelian(1);
  std::vector<Generator> g{{"a", GroupElement::abelian(fam, {1})}, {"a_inv", GroupElement::abelian(fam, {-1})}};
  if (with_identity) g.push_back({"e", GroupElement::identity(fam)});
  return CayleyGraph::build(fam, std::move(g), {"a a_inv"});
}
}  // namespace detail

/// Dirac walk on Z: A_k = [[nu e^{-ik}, i s mu], [i s mu, nu e^{ik}]], nu^2 + mu^2 = 1.
inline QuantumWalk make_dirac(double nu, double mu, int s) {
  if (s != 1 && s != -1) throw Error(ErrorCode::kConstraint, "s must be +1 or -1");
  if (std::abs(nu * nu + mu * mu - 1.0) > 1e-12) throw Error(ErrorCode::kConstraint, "nu^2 + mu^2 must equal 1");
  CMatrix plus = CMatrix::Zero(2, 2), minus = CMatrix::Zero(2, 2);
  plus(0, 0) = nu;
  minus(1, 1) = nu;
  if (mu == 0.0) return QuantumWalk(detail::line_graph(false), 2, {plus, minus});
  CMatrix e = kI * static_cast<double>(s) * mu * CMatrix(pauli::x());
  return QuantumWalk(detail::line_graph(true), 2, {plus, minus, e});
}

/// Weyl walk A_k = exp(-i k sigma_z).
inline QuantumWalk make_weyl() { return make_dirac(1.0, 0.0, 1); }

/// Hadamard coin followed by a conditional shift: A_k = diag(e^{-ik}, e^{ik}) H.
inline QuantumWalk make_hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix plus = CMatrix::Zero(2, 2), minus = CMatrix::Zero(2, 2);
  plus(0, 0) = r;
  plus(0, 1) = r;
  minus(1, 0) = r;
  minus(1, 1) = -r;
  return QuantumWalk(detail::line_graph(false), 2, {plus, minus});
}

}  // namespace qw
