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

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/groups.hpp"
#include "qwalk/linalg.hpp"

namespace qw {

/// A walk A = sum_h T_h (x) A_h over a Cayley graph, with one s x s
/// transition matrix per generator (s = 1 for scalar walks).
///
/// Exactly-zero transition matrices are accepted so that coarse-grained walks
/// keep a uniform {+a, -a, e} layout; zero_transitions() lists them.
class QuantumWalk {
 public:
  QuantumWalk() = default;

  QuantumWalk(CayleyGraph graph, int coin_dim, std::vector<CMatrix> transitions)
      : graph_(std::move(graph)), coin_dim_(coin_dim), transitions_(std::move(transitions)) {
    if (coin_dim_ < 1) throw Error(ErrorCode::kInvalidArgument, "coin dimension must be positive");
    if (transitions_.size() != graph_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "one transition matrix per generator expected");
    }
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
      if (transitions_[i].rows() != coin_dim_ || transitions_[i].cols() != coin_dim_) {
        throw Error(ErrorCode::kDimensionMismatch, "transition for '" + graph_.generators()[i].label + "' is not s x s");
      }
    }
  }

  static QuantumWalk scalar(CayleyGraph graph, const std::vector<cplx>& z) {
    std::vector<CMatrix> m;
    for (auto v : z) m.push_back(scalar_matrix(v));
    return QuantumWalk(std::move(graph), 1, std::move(m));
  }

  const CayleyGraph& graph() const { return graph_; }
  int coin_dim() const { return coin_dim_; }
  bool is_scalar() const { return coin_dim_ == 1; }
  const std::vector<CMatrix>& transitions() const { return transitions_; }

  const CMatrix& transition(const std::string& label) const {
    auto idx = graph_.index_of(label);
    if (!idx) throw Error(ErrorCode::kInvalidArgument, "no generator '" + label + "'");
    return transitions_[*idx];
  }

  /// Transition scalars in generator order; requires s = 1.
  std::vector<cplx> scalars() const {
    if (!is_scalar()) throw Error(ErrorCode::kDimensionMismatch, "scalars() on a walk with s > 1");
    std::vector<cplx> z;
    for (const auto& m : transitions_) z.push_back(m(0, 0));
    return z;
  }

  std::vector<std::string> zero_transitions(double tol = 0.0) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
      if (transitions_[i].norm() <= tol) out.push_back(graph_.generators()[i].label);
    }
    return out;
  }

  /// Copy without generators whose transition matrix is (numerically) zero.
  QuantumWalk pruned(double tol = 0.0) const {
    std::vector<Generator> gens;
    std::vector<CMatrix> mats;
    for (std::size_t i = 0; i < transitions_.size(); ++i) {
      if (transitions_[i].norm() > tol) {
        gens.push_back(graph_.generators()[i]);
        mats.push_back(transitions_[i]);
      }
    }
    return QuantumWalk(CayleyGraph::build(graph_.family(), std::move(gens), {}, false), coin_dim_, std::move(mats));
  }

 private:
  CayleyGraph graph_;
  int coin_dim_ = 1;
  std::vector<CMatrix> transitions_;
};

struct QuadrangularityReport {
  bool passed = true;
  /// Generator indices (h1, h2) whose quotient h1 h2^-1 is realised by no other pair.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Necessary condition for scalar walks: every h1 h2^-1 (h1 != h2) is also
/// realised by a different ordered pair.
inline QuadrangularityReport check_quadrangularity(const CayleyGraph& graph) {
  const auto& gens = graph.generators();
  std::map<GroupElement, int> count;
  for (const auto& h1 : gens) {
    for (const auto& h2 : gens) {
      if (h1.element == h2.element) continue;
      ++count[compose(h1.element, inverse(h2.element))];
    }
  }
  QuadrangularityReport rep;
  for (std::size_t i = 0; i < gens.size() && rep.passed; ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (i == j) continue;
      if (count[compose(gens[i].element, inverse(gens[j].element))] < 2) {
        rep.passed = false;
        rep.witness = std::make_pair(i, j);
        break;
      }
    }
  }
  return rep;
}

struct UnitarityReport {
  double tol = kDefaultTol;
  /// max over g != e of || sum_{h h'^-1 = g} A_h A_h'^dagger ||
  double left_cross = 0.0;
  /// max over g != e of || sum_{h^-1 h' = g} A_h^dagger A_h' ||
  double right_cross = 0.0;
  /// || sum_h A_h A_h^dagger - I ||
  double left_norm = 0.0;
  /// || sum_h A_h^dagger A_h - I ||
  double right_norm = 0.0;
  std::optional<GroupElement> worst_element;
  bool passed = false;

  double max_residual() const { return std::max({left_cross, right_cross, left_norm, right_norm}); }
};

/// Evaluates A A^dagger = A^dagger A = I coefficient by coefficient in the
/// group algebra. Residuals are Frobenius norms.
inline UnitarityReport check_unitarity(const QuantumWalk& walk, double tol = kDefaultTol) {
  const auto& gens = walk.graph().generators();
  const auto& mats = walk.transitions();
  const int s = walk.coin_dim();
  std::map<GroupElement, CMatrix> left, right;
  CMatrix left_id = CMatrix::Zero(s, s), right_id = CMatrix::Zero(s, s);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    left_id += mats[i] * mats[i].adjoint();
    right_id += mats[i].adjoint() * mats[i];
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (i == j) continue;
      auto gl = compose(gens[i].element, inverse(gens[j].element));
      auto gr = compose(inverse(gens[i].element), gens[j].element);
      auto [il, fresh_l] = left.try_emplace(gl, CMatrix::Zero(s, s));
      il->second += mats[i] * mats[j].adjoint();
      auto [ir, fresh_r] = right.try_emplace(gr, CMatrix::Zero(s, s));
      ir->second += mats[i].adjoint() * mats[j];
    }
  }
  UnitarityReport rep;
  rep.tol = tol;
  const CMatrix id = CMatrix::Identity(s, s);
  rep.left_norm = (left_id - id).norm();
  rep.right_norm = (right_id - id).norm();
  double worst = std::max(rep.left_norm, rep.right_norm);
  for (const auto* side : {&left, &right}) {
    for (const auto& [g, m] : *side) {
      double r = m.norm();
      // h h'^-1 = e only for h = h' (excluded), so g != e here.
      if (side == &left) rep.left_cross = std::max(rep.left_cross, r);
      else rep.right_cross = std::max(rep.right_cross, r);
      if (r > worst) {
        worst = r;
        rep.worst_element = g;
      }
    }
  }
  rep.passed = rep.max_residual() <= tol;
  return rep;
}

}  // namespace qw
