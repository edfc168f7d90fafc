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

#include "qwalk/abelian_class.hpp"
#include "qwalk/dihedral.hpp"

namespace qw {
namespace {

SolverOptions solver_options(int starts, std::uint64_t seed) {
  SolverOptions o;
  o.starts = starts;
  o.seed = seed;
  return o;
}

CayleyGraph z2z_graph() {
  auto fam = GroupFamily::abelian({2}, 1);
  return CayleyGraph::build(fam, {{"u", GroupElement::abelian(fam, {0, 1})}, {"v", GroupElement::abelian(fam, {1, 1})}});
}

TEST(CharacterDecompose, PureFreeGroupHasOneBlock) {
  auto w = QuantumWalk::scalar(detail::line_graph(false), {0.6, 0.8});
  auto b = character_decompose(w);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(b[0].j.empty());
  EXPECT_EQ(b[0].z[0], cplx(0.6));
}

TEST(CharacterDecompose, Z2xZBlocksFromOracle) {
  auto w = QuantumWalk::scalar(z2z_graph(), {0.6, cplx(0, 0.8)});
  auto b = character_decompose(w);
  ASSERT_EQ(b.size(), 2u);
  ASSERT_EQ(b[0].z.size(), 1u);  // both generators share the free part +1
  EXPECT_EQ(b[0].j, std::vector<std::int64_t>{1});
  EXPECT_NEAR(std::abs(b[0].z[0] - cplx(0.6, -0.8)), 0, 1e-15);
  EXPECT_NEAR(std::abs(b[1].z[0] - cplx(0.6, 0.8)), 0, 1e-15);
}

TEST(Classify, MonoidalShift) {
  auto fam = GroupFamily::free_abelian(1);
  auto g = CayleyGraph::build(fam, {{"a", GroupElement::abelian(fam, {1})}});
  auto res = classify(QuantumWalk::scalar(g, {std::polar(1.0, -0.3)}));
  ASSERT_EQ(res.blocks.size(), 1u);
  EXPECT_EQ(res.blocks[0].h_tilde, std::vector<std::int64_t>{1});
  EXPECT_NEAR(res.blocks[0].theta, 0.3, 1e-15);
}

TEST(Classify, Z2xZWalkSplitsIntoShifts) {
  const double r = 1.0 / std::sqrt(2.0);
  auto w = QuantumWalk::scalar(z2z_graph(), {r, cplx(0, r)});
  ASSERT_TRUE(check_unitarity(w).passed);
  auto res = classify(w);
  ASSERT_EQ(res.blocks.size(), 2u);
  for (const auto& b : res.blocks) EXPECT_EQ(b.h_tilde, std::vector<std::int64_t>{1});
  EXPECT_LE(affine_dispersion_residual(res), 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  auto lat = Lattice::ring(w.graph().family(), 9);
  auto st = LatticeState::zero(lat, 1);
  for (auto& a : st.amplitudes) a = cplx(n(rng), n(rng));
  auto lhs = evolve(w, st, 1).amplitudes;
  auto rhs = apply_classified(res, st).amplitudes;
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Classify, RejectsFiniteAndNonUnitary) {
  auto sq = CayleyGraph::from_words(GroupFamily::abelian({2, 2}, 0), {{"g1", "t1"}, {"g2", "t2"}});
  const double r = 1.0 / std::sqrt(2.0);
  try {
    classify(QuantumWalk::scalar(sq, {r, cplx(0, r)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFamilyMismatch);
  }
  try {
    classify(QuantumWalk::scalar(detail::line_graph(false), {r, r}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotUnitary);
  }
}

TEST(Solver, LineAdmitsOnlyMonoidalSolutions) {
  auto sols = brute_force_scalar_solutions(detail::line_graph(false), solver_options(64, 4));
  ASSERT_FALSE(sols.empty());
  for (const auto& s : sols) {
    EXPECT_TRUE(is_monoidal_solution(s));
    EXPECT_TRUE(check_unitarity(QuantumWalk::scalar(detail::line_graph(false), s.z)).passed);
  }
}

TEST(Solver, SquareGraphHasNontrivialSolution) {
  auto sq = CayleyGraph::from_words(GroupFamily::abelian({2, 2}, 0), {{"g1", "t1"}, {"g2", "t2"}});
  auto sols = brute_force_scalar_solutions(sq, solver_options(16, 2));
  ASSERT_FALSE(sols.empty());
  EXPECT_TRUE(std::any_of(sols.begin(), sols.end(), [](const auto& s) { return !is_monoidal_solution(s); }));
  for (const auto& s : sols) {
    EXPECT_LE(s.residual, 1e-10);
    EXPECT_GE(s.z[0].real(), 0.0);  // gauge
  }
}

TEST(Solver, GaugeAndDeterminism) {
  auto a = brute_force_scalar_solutions(z2z_graph(), solver_options(8, 9));
  auto b = brute_force_scalar_solutions(z2z_graph(), solver_options(8, 9));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].z, b[i].z);
  for (const auto& s : a) EXPECT_NO_THROW(classify(QuantumWalk::scalar(z2z_graph(), s.z)));
}

TEST(Solver, RediscoversClosedFormSolutions) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 1e-3);
  const std::vector<DihedralParams> targets{
      {DihedralCase::kGeneric, 0.8, 0.2, 0.5, 1, 1, 1},
      {DihedralCase::kGeneric, 0.3, 0.4, 0.7, 1, -1, 1},
      {DihedralCase::kGeneric, 0.6, 0.1, 0.3, -1, 1, -1},
  };
  for (const auto& prm : targets) {
    auto target = make_dihedral_walk(prm);
    auto start = target.scalars();
    for (auto& z : start) z += cplx(n(rng), n(rng));
    SolverOptions opts;
    opts.starts = 0;
    opts.warm_starts = {start};
    auto sols = brute_force_scalar_solutions(target.graph(), opts);
    ASSERT_EQ(sols.size(), 1u);
    // Read the family parameters back through coarse-graining and rebuild.
    auto found = QuantumWalk::scalar(target.graph(), sols[0].z);
    auto cf = extract_canonical_form(coarse_grain(found, default_tiling(found.graph())).result);
    ASSERT_TRUE(cf.identity_basis);
    ASSERT_TRUE(cf.closed_form.has_value());
    EXPECT_EQ(cf.closed_form->kase, DihedralCase::kGeneric);
    auto r = dihedral_scalars(cf.closed_form->params);
    const std::vector<cplx> rebuilt{r.za, r.za_inv, r.zb, r.zc, r.zd, r.ze};
    cplx overlap = 0.0;
    for (std::size_t k = 0; k < rebuilt.size(); ++k) overlap += std::conj(rebuilt[k]) * sols[0].z[k];
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-8);
    for (std::size_t k = 0; k < rebuilt.size(); ++k) EXPECT_NEAR(std::abs(rebuilt[k] * overlap - sols[0].z[k]), 0, 1e-8);
  }
}

}  // namespace
}  // namespace qw
