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

TEST(Momentum, DiracSymbol) {
  auto mw = to_momentum(make_dirac(0.8, 0.6, 1));
  const double k = 0.9;
  CMatrix a = mw.at(k);
  EXPECT_NEAR(std::abs(a(0, 0) - 0.8 * std::polar(1.0, -k)), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 1) - 0.8 * std::polar(1.0, k)), 0, 1e-15);
  EXPECT_NEAR(std::abs(a(0, 1) - cplx(0, 0.6)), 0, 1e-15);
  EXPECT_THROW(to_momentum(make_dihedral_walk({DihedralCase::kMuZero, 0.5, 0.5, 0.0, 1, 1, 1, 0.0})), Error);
}

TEST(Momentum, WeylDispersionIsAbsK) {
  auto d = dispersion(to_momentum(make_weyl()), 8);
  ASSERT_TRUE(d.su2);
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    EXPECT_NEAR(d.branches[0][i], std::abs(d.k[i]), 1e-15);
    EXPECT_NEAR(d.branches[1][i], -std::abs(d.k[i]), 1e-15);
  }
}

TEST(Momentum, DiracDispersionMatchesArccos) {
  const double nu = 0.8;
  auto d = dispersion(to_momentum(make_dirac(nu, 0.6, 1)), 256);
  for (std::size_t i = 0; i < d.k.size(); ++i) EXPECT_NEAR(d.branches[0][i], std::acos(nu * std::cos(d.k[i])), 1e-12);
}

TEST(Momentum, DiracVelocityFromOracle) {
  auto v = group_velocity_at(to_momentum(make_dirac(0.8, 0.6, 1)), 1.0, 1e-5);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v, 0.7465162449295902, 1e-9);
}

TEST(Momentum, WeylVelocityFlagsCrossings) {
  auto d = dispersion(to_momentum(make_weyl()), 64);
  auto v = group_velocity(d);
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    if (v.flagged[i]) continue;
    EXPECT_NEAR(v.value[i], d.k[i] > 0 ? 1.0 : -1.0, 1e-12);
  }
  EXPECT_TRUE(v.flagged[32]);  // k = 0
  EXPECT_TRUE(v.flagged[0]);   // k = -pi
}

TEST(Momentum, HadamardSpectrumIsUnimodular) {
  auto mw = to_momentum(make_hadamard());
  auto d = dispersion(mw, 32);
  ASSERT_TRUE(d.su2);
  // det A_k = -1, so A_k / (+-i) is in SU(2) with half-trace -+ sin(k) / sqrt(2).
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    EXPECT_NEAR(std::abs(std::cos(d.branches[0][i])), std::abs(std::sin(d.k[i])) / std::sqrt(2.0), 1e-12);
  }
  EXPECT_THROW(dispersion(to_momentum(QuantumWalk(detail::line_graph(false), 2,
                                                  {CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)})),
                          8),
               Error);
}

TEST(Momentum, BrillouinGrid) {
  auto k = brillouin_grid(4);
  EXPECT_DOUBLE_EQ(k[0], -kPi);
  EXPECT_DOUBLE_EQ(k[2], 0.0);
  EXPECT_THROW(brillouin_grid(0), Error);
}

}  // namespace
}  // namespace qw
