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

#include <gtest/gtest.h>

#include <random>

#include "qwalk/dihedral.hpp"

namespace qw {
namespace {

const DihedralParams kGeneric{DihedralCase::kGeneric, 0.8, 0.2, 0.5, 1, 1, 1, 0.0};

TEST(CoarseGrain, MatricesFollowScalarLayout) {
  auto w = make_dihedral_walk(kGeneric);
  auto z = dihedral_scalars(kGeneric);
  auto cg = coarse_grain(w, default_tiling(w.graph()));
  const auto& m = cg.result.transitions();
  Mat2 plus, minus, zero;
  plus << z.za, z.zb, z.zc, z.za_inv;
  minus << z.za_inv, z.zc, z.zb, z.za;
  zero << z.ze, z.zd, z.zd, z.ze;
  EXPECT_LT((m[0] - plus).norm(), 1e-15);
  EXPECT_LT((m[1] - minus).norm(), 1e-15);
  EXPECT_LT((m[2] - zero).norm(), 1e-15);
  EXPECT_TRUE(check_unitarity(cg.result).passed);
  // b = ar: tau(b, 1) = 2 and the coarse shift is a^-1.
  EXPECT_EQ(cg.tau[2][0], 1u);
  EXPECT_EQ(cg.coarse_shift[2][0], -1);
}

TEST(CoarseGrain, KeepsZeroMatrices) {
  auto w = make_dihedral_walk({DihedralCase::kMuZero, 0.5, 0.5, 0.0, 1, 1, 1, 0.0});
  auto cg = coarse_grain(w, default_tiling(w.graph()));
  EXPECT_EQ(cg.result.graph().size(), 3u);
  EXPECT_EQ(cg.result.zero_transitions(), std::vector<std::string>{"e"});
}

TEST(CoarseGrain, RejectsLongCoarseShifts) {
  auto fam = GroupFamily::infinite_dihedral();
  auto g = CayleyGraph::build(fam, {{"a2", GroupElement::dihedral(fam, 2, 0)},
                                    {"b", GroupElement::dihedral(fam, 1, 1)},
                                    {"d", GroupElement::dihedral(fam, 0, 1)}});
  auto w = QuantumWalk::scalar(g, {0.5, 0.5, 0.5});
  try {
    coarse_grain(w, default_tiling(g));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCoordination);
  }
  EXPECT_THROW(coarse_grain(make_dirac(0.8, 0.6, 1), CosetTiling(fam, 0, 0)), Error);
  // The full dihedral graph needs m' = m.
  auto f2 = make_dihedral_walk(kGeneric);
  EXPECT_THROW(coarse_grain(f2, CosetTiling(fam, 0, 2)), Error);
}

TEST(CoarseGrain, EvolutionMatchesScalarWalkFromDelta) {
  auto w = make_dihedral_walk(kGeneric);
  auto cg = coarse_grain(w, default_tiling(w.graph()));
  auto rep = verify_equivalence(cg, 20, 0, 1);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_deviation, 1e-12);
}

TEST(CoarseGrain, EvolutionMatchesForRandomStatesAndTilings) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n;
  std::uniform_int_distribution<int> shift(-3, 3);
  for (auto kase : {DihedralCase::kMuZero, DihedralCase::kZeZero, DihedralCase::kZdZero, DihedralCase::kGeneric}) {
    auto prm = sample_dihedral_params(kase, rng);
    const int t = shift(rng), m = shift(rng);
    auto w = translate_reflections(make_dihedral_walk(prm), t);
    auto cg = coarse_grain(w, CosetTiling(w.graph().family(), m, m + t));
    const std::int64_t ring = 31;
    CVector psi(2 * ring);
    for (auto& a : psi) a = cplx(n(rng), n(rng));
    psi.normalize();
    auto rep = verify_equivalence(cg, psi, ring, 20);
    EXPECT_LE(rep.max_deviation, 1e-12) << to_string(kase);
  }
}

TEST(CoarseGrain, SpectraIndependentOfRepresentatives) {
  std::mt19937_64 rng(8);
  auto w = make_dihedral_walk(kGeneric);
  auto ref = to_momentum(coarse_grain(w, CosetTiling(w.graph().family(), 0, 0)).result);
  for (int m = -3; m <= 3; ++m) {
    for (int t = -2; t <= 2; ++t) {
      auto wt = translate_reflections(w, t);
      auto mw = to_momentum(coarse_grain(wt, CosetTiling(wt.graph().family(), m, m + t)).result);
      for (double k : brillouin_grid(32)) {
        auto a = eigenphases(ref.at(k)), b = eigenphases(mw.at(k));
        for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(phase_distance(a[i], b[i]), 1e-10);
      }
    }
  }
}

}  // namespace
}  // namespace qw
