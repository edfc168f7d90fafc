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

#include "qwalk/dihedral.hpp"

namespace qw {
namespace {

TEST(Unitarity, MonoidalShiftIsUnitary) {
  auto z = GroupFamily::free_abelian(1);
  auto g = CayleyGraph::build(z, {{"a", GroupElement::abelian(z, {1})}});
  auto rep = check_unitarity(QuantumWalk::scalar(g, {std::polar(1.0, 0.4)}));
  EXPECT_TRUE(rep.passed);
  EXPECT_LT(rep.max_residual(), 1e-15);
}

TEST(Unitarity, BalancedLineWalkFails) {
  const double r = 1.0 / std::sqrt(2.0);
  auto rep = check_unitarity(QuantumWalk::scalar(detail::line_graph(false), {r, r}));
  EXPECT_FALSE(rep.passed);
  EXPECT_NEAR(rep.left_cross, 0.5, 1e-15);
  ASSERT_TRUE(rep.worst_element.has_value());
}

TEST(Unitarity, SpinorialWalks) {
  EXPECT_TRUE(check_unitarity(make_dirac(0.8, 0.6, 1)).passed);
  EXPECT_TRUE(check_unitarity(make_weyl()).passed);
  EXPECT_TRUE(check_unitarity(make_hadamard()).passed);
  CMatrix bad = CMatrix::Identity(2, 2);
  EXPECT_FALSE(check_unitarity(QuantumWalk(detail::line_graph(false), 2, {bad, bad})).passed);
}

TEST(Unitarity, DihedralGenericScalarsFromOracle) {
  // Reference scalars from tests/oracles/derive.py.
  DihedralParams p{DihedralCase::kGeneric, 0.8, 0.2, 0.5, 1, 1, 1, 0.0};
  auto w = make_dihedral_walk(p);
  auto z = w.scalars();
  ASSERT_EQ(z.size(), 6u);
  EXPECT_NEAR(std::abs(z[0] - cplx(0.3464101615137754, 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[1] - cplx(0.34641016151377535, 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[2] - cplx(0, 0.6928203230275508)), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[3] - cplx(0, -0.17320508075688767)), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[4] - cplx(0, 0.4)), 0, 1e-15);
  EXPECT_NEAR(std::abs(z[5] - cplx(-0.3, 0)), 0, 1e-15);
  EXPECT_LE(check_unitarity(w).max_residual(), 1e-12);
}

TEST(Quadrangularity, LineAndDihedralGraphs) {
  auto line = detail::line_graph(false);
  auto rep = check_quadrangularity(line);
  EXPECT_FALSE(rep.passed);
  EXPECT_TRUE(rep.witness.has_value());
  EXPECT_TRUE(check_quadrangularity(dihedral_cayley_graph(true, true)).passed);
  EXPECT_TRUE(check_quadrangularity(dihedral_cayley_graph(false, false)).passed);
  auto sq = CayleyGraph::from_words(GroupFamily::abelian({2, 2}, 0), {{"g1", "t1"}, {"g2", "t2"}});
  EXPECT_TRUE(check_quadrangularity(sq).passed);
}

TEST(QuantumWalk, ValidatesShapes) {
  auto line = detail::line_graph(false);
  EXPECT_THROW(QuantumWalk(line, 2, {CMatrix::Zero(2, 2)}), Error);
  EXPECT_THROW(QuantumWalk(line, 2, {CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)}), Error);
  EXPECT_THROW(QuantumWalk(line, 0, {}), Error);
  auto w = QuantumWalk(line, 2, {CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)});
  EXPECT_EQ(w.zero_transitions(), std::vector<std::string>{"a"});
  EXPECT_EQ(w.pruned().graph().size(), 1u);
  EXPECT_THROW(w.scalars(), Error);
}

}  // namespace
}  // namespace qw
