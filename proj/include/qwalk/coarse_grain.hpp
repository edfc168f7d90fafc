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

#include <array>
#include <string>
#include <vector>

#include "qwalk/lattice.hpp"
#include "qwalk/walk.hpp"

namespace qw {

/// Scalar walk on a dihedral graph re-expressed as a two-component walk on
/// H = <a>, using the basis c1 -> (1,0), c2 -> (0,1).
struct CoarseGraining {
  QuantumWalk source;
  CosetTiling tiling;
  /// tau[i][j]: coset of c_j h_i^-1, i.e. x c_j h^-1 = x' c_tau.
  std::vector<std::array<std::size_t, 2>> tau;
  /// Exponent t of the coarse generator a^t = c_tau h_i c_j^-1, t in {-1, 0, 1}.
  std::vector<std::array<int, 2>> coarse_shift;
  /// Walk on Z (or Z_n) with generators a, a_inv, e; zero matrices are kept.
  QuantumWalk result;
};

namespace detail {

inline CayleyGraph coarse_line_graph(const GroupFamily& dihedral) {
  GroupFamily fam = dihedral.kind() == FamilyKind::kFiniteDihedral
                        ? GroupFamily::abelian({dihedral.dihedral_order()}, 0)
                        : GroupFamily::free_abelian(1);
  std::vector<Generator> g{{"a", GroupElement::abelian(fam, {1})},
                           {"a_inv", GroupElement::abelian(fam, {-1})},
                           {"e", GroupElement::identity(fam)}};
  return CayleyGraph::build(fam, std::move(g), {"a a_inv"});
}

/// Signed representative of a rotation exponent (reduced into (-n/2, n/2] for D_n).
inline std::int64_t signed_rotation(const GroupElement& g) {
  std::int64_t t = g.rotation();
  std::int64_t n = g.family().dihedral_order();
  if (n > 0 && t > n / 2) t -= n;
  return t;
}

}  // namespace detail

inline CoarseGraining coarse_grain(const QuantumWalk& walk, const CosetTiling& tiling) {
  const auto& fam = walk.graph().family();
  if (!walk.is_scalar()) throw Error(ErrorCode::kDimensionMismatch, "coarse-graining expects a scalar walk");
  if (!fam.is_dihedral()) throw Error(ErrorCode::kFamilyMismatch, "coarse-graining expects a dihedral walk");
  if (!(tiling.family() == fam)) throw Error(ErrorCode::kFamilyMismatch, "tiling and walk families differ");

  CoarseGraining cg;
  cg.source = walk;
  cg.tiling = tiling;
  std::array<CMatrix, 3> mats;  // shifts +1, -1, 0
  for (auto& m : mats) m = CMatrix::Zero(2, 2);

  const auto& gens = walk.graph().generators();
  const auto z = walk.scalars();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& h = gens[i].element;
    std::array<std::size_t, 2> tau{};
    std::array<int, 2> shift{};
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& cj = tiling.representative(j);
      std::size_t t = tiling.coset_of(compose(cj, inverse(h)));
      // Both Kronecker deltas: c_i h c_j^-1 lies in H exactly for i = tau(h, j).
      for (std::size_t ii = 0; ii < 2; ++ii) {
        bool in_h = compose(compose(tiling.representative(ii), h), inverse(cj)).reflection() == 0;
        if (in_h != (ii == t)) throw Error(ErrorCode::kInvalidArgument, "inconsistent coset bookkeeping");
      }
      GroupElement coarse = compose(compose(tiling.representative(t), h), inverse(cj));
      std::int64_t r = detail::signed_rotation(coarse);
      if (r < -1 || r > 1) {
        throw Error(ErrorCode::kCoordination, "generator '" + gens[i].label + "' coarse-grains to a^" + std::to_string(r));
      }
      tau[j] = t;
      shift[j] = static_cast<int>(r);
      std::size_t slot = r == 1 ? 0 : (r == -1 ? 1 : 2);
      mats[slot](static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) += z[i];
    }
    cg.tau.push_back(tau);
    cg.coarse_shift.push_back(shift);
  }
  cg.result = QuantumWalk(detail::coarse_line_graph(fam), 2, {mats[0], mats[1], mats[2]});
  return cg;
}

struct EquivalenceReport {
  double max_deviation = 0.0;
  int steps = 0;
  bool passed = false;
};

/// Evolves the scalar walk on the (site, coset) lattice and the coarse-grained
/// walk on the (site, component) lattice from the same amplitude array and
/// compares them after every step.
inline EquivalenceReport verify_equivalence(const CoarseGraining& cg, const CVector& initial, std::int64_t ring_size,
                                            int steps, double tol = 1e-12) {
  Lattice scalar_lat = Lattice::ring(cg.source.graph().family(), ring_size, cg.tiling);
  Lattice cg_lat = Lattice::ring(cg.result.graph().family(), ring_size);
  LatticeState a{scalar_lat, 1, initial};
  LatticeState b{cg_lat, 2, initial};
  if (static_cast<std::size_t>(initial.size()) != scalar_lat.cell_count()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial state size");
  }
  auto ta = walk_terms(cg.source);
  auto tb = walk_terms(cg.result);
  EquivalenceReport rep;
  rep.steps = steps;
  for (int t = 0; t < steps; ++t) {
    a = apply_terms(ta, 1, a);
    b = apply_terms(tb, 2, b);
    rep.max_deviation = std::max(rep.max_deviation, (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff());
  }
  rep.passed = rep.max_deviation <= tol;
  return rep;
}

/// Delta state at (site, coset) on a ring wide enough that nothing wraps.
inline EquivalenceReport verify_equivalence(const CoarseGraining& cg, int steps, std::int64_t site = 0,
                                            std::size_t coset = 0, double tol = 1e-12) {
  std::int64_t ring = 2 * steps + 3;
  Lattice lat = Lattice::ring(cg.source.graph().family(), ring, cg.tiling);
  auto st = LatticeState::delta(lat, 1, {site}, coset);
  return verify_equivalence(cg, st.amplitudes, ring, steps, tol);
}

}  // namespace qw
