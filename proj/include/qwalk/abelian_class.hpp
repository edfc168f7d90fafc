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
#include <map>
#include <random>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/least_squares.hpp"
#include "qwalk/momentum.hpp"

namespace qw {

/// One character sector j of a scalar walk on F x Z^d: the walk restricted to
/// it is scalar on Z^d with amplitudes z_h(j).
struct CharacterBlock {
  /// Character indices j_l in {1, ..., i_l}.
  std::vector<std::int64_t> j;
  /// Distinct free parts h of the generators.
  std::vector<std::vector<std::int64_t>> shifts;
  /// z_h(j) per entry of `shifts`.
  std::vector<cplx> z;
  /// Surviving shift after classification.
  std::optional<std::size_t> selected;
  std::vector<std::int64_t> h_tilde;
  /// Block equals e^{-i theta} T_{h_tilde}.
  double theta = 0.0;
};

namespace detail {

inline std::vector<std::vector<std::int64_t>> character_indices(const std::vector<std::int64_t>& torsion) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (auto il : torsion) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& prefix : out) {
      for (std::int64_t j = 1; j <= il; ++j) {
        auto v = prefix;
        v.push_back(j);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// exp(2 pi i sum_l j_l m_l / i_l).
inline cplx character(const std::vector<std::int64_t>& j, std::span<const std::int64_t> m,
                      const std::vector<std::int64_t>& torsion) {
  double ph = 0.0;
  for (std::size_t l = 0; l < torsion.size(); ++l) {
    ph += static_cast<double>((j[l] * m[l]) % torsion[l]) / static_cast<double>(torsion[l]);
  }
  return std::polar(1.0, 2.0 * kPi * ph);
}

inline void require_infinite_abelian(const GroupFamily& fam) {
  if (!fam.is_abelian() || fam.free_rank() < 1) {
    throw Error(ErrorCode::kFamilyMismatch, "infinite Abelian group F x Z^d (d >= 1) expected, got " + fam.tag());
  }
}

}  // namespace detail

/// z_h(j) = sum_{f in R(h)} z_{(f,h)} exp(2 pi i sum_l j_l m_l(f) / i_l), blocks in lexicographic j.
inline std::vector<CharacterBlock> character_decompose(const QuantumWalk& walk) {
  const auto& fam = walk.graph().family();
  if (!fam.is_abelian()) throw Error(ErrorCode::kFamilyMismatch, "Abelian family expected, got " + fam.tag());
  if (!walk.is_scalar()) throw Error(ErrorCode::kDimensionMismatch, "scalar walk expected");
  const auto& torsion = fam.torsion();
  const auto z = walk.scalars();
  const auto& gens = walk.graph().generators();

  std::vector<std::vector<std::int64_t>> shifts;
  std::vector<std::size_t> slot(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<std::int64_t> h(gens[i].element.free_part().begin(), gens[i].element.free_part().end());
    auto it = std::find(shifts.begin(), shifts.end(), h);
    slot[i] = static_cast<std::size_t>(it - shifts.begin());
    if (it == shifts.end()) shifts.push_back(h);
  }
  std::vector<CharacterBlock> blocks;
  for (auto& j : detail::character_indices(torsion)) {
    CharacterBlock b;
    b.j = j;
    b.shifts = shifts;
    b.z.assign(shifts.size(), 0.0);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      b.z[slot[i]] += z[i] * detail::character(j, gens[i].element.torsion_part(), torsion);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

struct ClassificationResult {
  GroupFamily family;
  std::vector<CharacterBlock> blocks;
};

namespace detail {
inline double squared_norm(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>((a[i] - b[i]) * (a[i] - b[i]));
  return s;
}
}  // namespace detail

/// Reduces every character block to a single shift: repeatedly the pair of
/// surviving shifts at maximal Euclidean distance is unique, so unitarity
/// forces one of its two amplitudes to vanish. Throws kNotUnitary when the
/// walk fails unitarity or an elimination is contradicted.
inline ClassificationResult classify(const QuantumWalk& walk, double tol = kDefaultTol) {
  detail::require_infinite_abelian(walk.graph().family());
  auto rep = check_unitarity(walk, tol);
  if (!rep.passed) {
    throw Error(ErrorCode::kNotUnitary, "walk is not unitary (residual " + std::to_string(rep.max_residual()) + ")");
  }
  const double eps = std::sqrt(tol);
  ClassificationResult res;
  res.family = walk.graph().family();
  res.blocks = character_decompose(walk);
  for (auto& b : res.blocks) {
    std::vector<bool> alive(b.z.size());
    for (std::size_t i = 0; i < b.z.size(); ++i) alive[i] = std::abs(b.z[i]) > eps;
    while (std::count(alive.begin(), alive.end(), true) > 1) {
      double best = -1.0;
      std::size_t bi = 0, bj = 0;
      int ties = 0;
      for (std::size_t i = 0; i < b.z.size(); ++i) {
        for (std::size_t k = 0; k < b.z.size(); ++k) {
          if (i == k || !alive[i] || !alive[k]) continue;
          double n = detail::squared_norm(b.shifts[i], b.shifts[k]);
          if (n > best) {
            best = n;
            bi = i;
            bj = k;
            ties = 1;
          } else if (n == best) {
            std::vector<std::int64_t> v1(b.shifts[i].size()), v2(v1.size());
            for (std::size_t l = 0; l < v1.size(); ++l) {
              v1[l] = b.shifts[i][l] - b.shifts[k][l];
              v2[l] = b.shifts[bi][l] - b.shifts[bj][l];
            }
            if (v1 == v2) ++ties;
          }
        }
      }
      if (ties != 1) throw Error(ErrorCode::kNotUnitary, "maximal difference realised by several pairs");
      if (std::abs(b.z[bi] * std::conj(b.z[bj])) > eps) {
        throw Error(ErrorCode::kNotUnitary, "unique pair with both amplitudes nonzero");
      }
      alive[std::abs(b.z[bi]) < std::abs(b.z[bj]) ? bi : bj] = false;
    }
    auto it = std::find(alive.begin(), alive.end(), true);
    if (it == alive.end()) throw Error(ErrorCode::kNotUnitary, "character block vanishes");
    const std::size_t sel = static_cast<std::size_t>(it - alive.begin());
    if (std::abs(std::abs(b.z[sel]) - 1.0) > eps) throw Error(ErrorCode::kNotUnitary, "surviving amplitude is not unimodular");
    b.selected = sel;
    b.h_tilde = b.shifts[sel];
    b.theta = -std::arg(b.z[sel]);
  }
  return res;
}

/// Applies the classified direct sum of shifts to a state on Lattice::ring(family, N).
inline LatticeState apply_classified(const ClassificationResult& res, const LatticeState& state) {
  const auto& lat = state.lattice;
  if (!(lat.family() == res.family) || state.coin_dim != 1) throw Error(ErrorCode::kFamilyMismatch, "state family");
  const auto& torsion = res.family.torsion();
  std::int64_t fsize = 1;
  for (auto t : torsion) fsize *= t;
  // Split sites into (f, x).
  std::map<std::vector<std::int64_t>, std::vector<std::pair<std::vector<std::int64_t>, std::size_t>>> by_x;
  for (std::size_t s = 0; s < lat.site_count(); ++s) {
    auto c = lat.site_coordinates(s);
    std::vector<std::int64_t> f(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(torsion.size()));
    std::vector<std::int64_t> x(c.begin() + static_cast<std::ptrdiff_t>(torsion.size()), c.end());
    by_x[x].push_back({f, s});
  }
  LatticeState out = LatticeState::zero(lat, 1);
  for (const auto& b : res.blocks) {
    const cplx phase = std::polar(1.0, -b.theta);
    for (const auto& [x, fs] : by_x) {
      std::vector<std::int64_t> xs = x;
      for (std::size_t l = 0; l < xs.size(); ++l) xs[l] += b.h_tilde[l];
      const auto& src = by_x.at([&] {
        // Wrap onto the ring through a site lookup.
        std::vector<std::int64_t> c(torsion.size(), 0);
        c.insert(c.end(), xs.begin(), xs.end());
        auto cc = lat.site_coordinates(lat.site_index(c));
        return std::vector<std::int64_t>(cc.begin() + static_cast<std::ptrdiff_t>(torsion.size()), cc.end());
      }());
      cplx hat = 0.0;
      for (const auto& [f, s] : src) hat += std::conj(detail::character(b.j, f, torsion)) * state.amplitudes[static_cast<Eigen::Index>(s)];
      for (const auto& [f, s] : fs) {
        out.amplitudes[static_cast<Eigen::Index>(s)] +=
            phase * hat * detail::character(b.j, f, torsion) / static_cast<double>(fsize);
      }
    }
  }
  return out;
}

/// Max over blocks and sampled k of the distance between arg A_j(k) and the
/// affine law -theta_j - k.h_tilde_j.
inline double affine_dispersion_residual(const ClassificationResult& res, int samples = 64, std::uint64_t seed = 7) {
  const int d = res.family.free_rank();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  double worst = 0.0;
  for (const auto& b : res.blocks) {
    std::vector<MomentumTerm> terms;
    for (std::size_t i = 0; i < b.z.size(); ++i) terms.push_back({b.shifts[i], scalar_matrix(b.z[i])});
    MomentumWalk mw(1, d, terms);
    for (int s = 0; s < samples; ++s) {
      std::vector<double> k(static_cast<std::size_t>(d));
      for (auto& v : k) v = u(rng);
      cplx a = mw.at(k)(0, 0);
      double lin = -b.theta;
      for (int l = 0; l < d; ++l) lin -= k[static_cast<std::size_t>(l)] * static_cast<double>(b.h_tilde[static_cast<std::size_t>(l)]);
      worst = std::max({worst, phase_distance(std::arg(a), lin), std::abs(std::abs(a) - 1.0)});
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Brute-force search for scalar solutions

struct SolverOptions {
  int starts = 256;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  /// Tried before the random starts.
  std::vector<std::vector<cplx>> warm_starts;
  int max_evaluations = 4000;
};

struct ScalarSolution {
  std::vector<cplx> z;
  double residual = 0.0;
};

/// Exactly one amplitude above `tol` in magnitude.
inline bool is_monoidal_solution(const ScalarSolution& s, double tol = 1e-6) {
  return std::count_if(s.z.begin(), s.z.end(), [&](cplx v) { return std::abs(v) > tol; }) == 1;
}

namespace detail {

struct UnitaritySystem {
  std::size_t n = 0;
  /// (i, j) pairs contributing z_i z_j^* to each left/right equation.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> left, right;

  explicit UnitaritySystem(const CayleyGraph& graph) : n(graph.size()) {
    std::map<GroupElement, std::size_t> li, ri;
    const auto& g = graph.generators();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        auto gl = compose(g[i].element, inverse(g[j].element));
        auto gr = compose(inverse(g[i].element), g[j].element);
        auto [a, fa] = li.try_emplace(gl, left.size());
        if (fa) left.emplace_back();
        left[a->second].push_back({i, j});
        // sum z_i^* z_j = conj of sum z_j^* z_i; stored as (j, i) to share the form z_x z_y^*.
        auto [b, fb] = ri.try_emplace(gr, right.size());
        if (fb) right.emplace_back();
        right[b->second].push_back({j, i});
      }
    }
  }

  int residual_count() const { return static_cast<int>(2 * (left.size() + right.size()) + 1); }

  void residuals(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    auto z = [&](std::size_t i) { return cplx(x[static_cast<Eigen::Index>(2 * i)], x[static_cast<Eigen::Index>(2 * i + 1)]); };
    Eigen::Index k = 0;
    for (const auto* side : {&left, &right}) {
      for (const auto& eq : *side) {
        cplx s = 0.0;
        for (auto [i, j] : eq) s += z(i) * std::conj(z(j));
        r[k++] = s.real();
        r[k++] = s.imag();
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(z(i));
    r[k] = nrm - 1.0;
  }

  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    jac.setZero(residual_count(), static_cast<Eigen::Index>(2 * n));
    auto z = [&](std::size_t i) { return cplx(x[static_cast<Eigen::Index>(2 * i)], x[static_cast<Eigen::Index>(2 * i + 1)]); };
    Eigen::Index k = 0;
    for (const auto* side : {&left, &right}) {
      for (const auto& eq : *side) {
        for (auto [i, j] : eq) {
          // d(z_i conj z_j): wrt Re z_i -> conj z_j, Im z_i -> i conj z_j,
          // Re z_j -> z_i, Im z_j -> -i z_i.
          const cplx ci = std::conj(z(j)), cj = z(i);
          const auto ii = static_cast<Eigen::Index>(2 * i), jj = static_cast<Eigen::Index>(2 * j);
          jac(k, ii) += ci.real();
          jac(k + 1, ii) += ci.imag();
          jac(k, ii + 1) += (kI * ci).real();
          jac(k + 1, ii + 1) += (kI * ci).imag();
          jac(k, jj) += cj.real();
          jac(k + 1, jj) += cj.imag();
          jac(k, jj + 1) += (-kI * cj).real();
          jac(k + 1, jj + 1) += (-kI * cj).imag();
        }
        k += 2;
      }
    }
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(2 * n); ++i) jac(k, i) = 2.0 * x[i];
  }
};

/// Rotates the first amplitude above 1e-6 onto the positive real axis.
inline std::vector<cplx> fix_gauge(std::vector<cplx> z) {
  for (auto v : z) {
    if (std::abs(v) > 1e-6) {
      const cplx g = std::abs(v) / v;
      for (auto& w : z) w *= g;
      break;
    }
  }
  return z;
}

}  // namespace detail

/// Multi-start Levenberg-Marquardt on the unitarity equations of a scalar
/// walk over `graph`. Returns gauge-fixed, deduplicated solutions whose
/// residual is at most opts.tol. An empty result means none were found.
inline std::vector<ScalarSolution> brute_force_scalar_solutions(const CayleyGraph& graph, const SolverOptions& opts = {}) {
  if (graph.size() > 6) throw Error(ErrorCode::kInvalidArgument, "solver is limited to at most 6 generators");
  const detail::UnitaritySystem sys(graph);
  const std::size_t n = graph.size();
  ResidualFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) { sys.residuals(x, r); };
  JacobianFn jf = [&](const Eigen::VectorXd& x, Eigen::MatrixXd& j) { sys.jacobian(x, j); };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ScalarSolution> out;
  const int total = static_cast<int>(opts.warm_starts.size()) + opts.starts;
  for (int s = 0; s < total; ++s) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(2 * n));
    if (s < static_cast<int>(opts.warm_starts.size())) {
      const auto& w = opts.warm_starts[static_cast<std::size_t>(s)];
      if (w.size() != n) throw Error(ErrorCode::kDimensionMismatch, "warm start size");
      for (std::size_t i = 0; i < n; ++i) {
        x[static_cast<Eigen::Index>(2 * i)] = w[i].real();
        x[static_cast<Eigen::Index>(2 * i + 1)] = w[i].imag();
      }
    } else {
      for (auto& v : x) v = gauss(rng);
      x /= x.norm();
    }
    auto res = minimize_least_squares(f, sys.residual_count(), x, jf, opts.max_evaluations);
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = cplx(res.x[static_cast<Eigen::Index>(2 * i)], res.x[static_cast<Eigen::Index>(2 * i + 1)]);
    }
    z = detail::fix_gauge(z);
    const double unit = check_unitarity(QuantumWalk::scalar(graph, z), opts.tol).max_residual();
    if (unit > opts.tol) continue;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const ScalarSolution& o) {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(o.z[i] - z[i]));
      return d <= 1e-7;
    });
    if (!dup) out.push_back({z, unit});
  }
  return out;
}

}  // namespace qw
