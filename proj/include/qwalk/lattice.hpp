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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/groups.hpp"
#include "qwalk/walk.hpp"

namespace qw {

/// Finite periodic realisation of a position space.
///
/// Free directions are truncated to a ring of `ring_size` sites with
/// coordinates in [-ring_size/2, ring_size - ring_size/2); cyclic factors are
/// kept whole. Dihedral groups are laid out as (site, coset bit) pairs through
/// a CosetTiling, so D_inf on N sites is the quotient D_N. A cell is one
/// (site, coset) pair; a state stores coin_dim amplitudes per cell.
class Lattice {
 public:
  Lattice() = default;

  static Lattice ring(const GroupFamily& family, std::int64_t ring_size, std::optional<CosetTiling> tiling = std::nullopt) {
    Lattice lat;
    lat.family_ = family;
    if (family.is_dihedral()) {
      lat.tiling_ = tiling ? *tiling : CosetTiling(family, 0, 0);
      if (!(lat.tiling_.family() == family)) throw Error(ErrorCode::kFamilyMismatch, "tiling family");
      if (family.kind() == FamilyKind::kFiniteDihedral) {
        lat.extents_ = {family.dihedral_order()};
        lat.offsets_ = {0};
      } else {
        if (ring_size < 1) throw Error(ErrorCode::kInvalidArgument, "ring size must be positive");
        lat.extents_ = {ring_size};
        lat.offsets_ = {-(ring_size / 2)};
      }
      lat.cosets_ = 2;
    } else {
      for (auto t : family.torsion()) {
        lat.extents_.push_back(t);
        lat.offsets_.push_back(0);
      }
      if (family.free_rank() > 0 && ring_size < 1) throw Error(ErrorCode::kInvalidArgument, "ring size must be positive");
      for (int i = 0; i < family.free_rank(); ++i) {
        lat.extents_.push_back(ring_size);
        lat.offsets_.push_back(-(ring_size / 2));
      }
      lat.cosets_ = 1;
    }
    lat.sites_ = 1;
    for (auto e : lat.extents_) lat.sites_ *= static_cast<std::size_t>(e);
    return lat;
  }

  const GroupFamily& family() const { return family_; }
  const CosetTiling& tiling() const { return tiling_; }
  std::size_t site_count() const { return sites_; }
  std::size_t cosets() const { return cosets_; }
  std::size_t cell_count() const { return sites_ * cosets_; }
  /// Free-direction ring size (or the cyclic order for finite dihedral groups).
  std::int64_t ring_size() const { return extents_.empty() ? 1 : extents_.back(); }

  std::vector<std::int64_t> site_coordinates(std::size_t site) const {
    std::vector<std::int64_t> c(extents_.size());
    for (std::size_t l = extents_.size(); l-- > 0;) {
      auto e = static_cast<std::size_t>(extents_[l]);
      c[l] = static_cast<std::int64_t>(site % e) + offsets_[l];
      site /= e;
    }
    return c;
  }

  std::size_t site_index(const std::vector<std::int64_t>& coords) const {
    if (coords.size() != extents_.size()) throw Error(ErrorCode::kDimensionMismatch, "site coordinate arity");
    std::size_t idx = 0;
    for (std::size_t l = 0; l < extents_.size(); ++l) {
      idx = idx * static_cast<std::size_t>(extents_[l]) +
            static_cast<std::size_t>(detail::mod(coords[l] - offsets_[l], extents_[l]));
    }
    return idx;
  }

  std::string site_label(std::size_t site) const {
    auto c = site_coordinates(site);
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ":";
      s += std::to_string(c[i]);
    }
    return s;
  }

  GroupElement element(std::size_t cell) const {
    std::size_t site = cell / cosets_;
    auto c = site_coordinates(site);
    if (family_.is_dihedral()) return tiling_.element(c[0], cell % cosets_);
    return GroupElement::abelian(family_, c);
  }

  /// Cell holding g, reducing free coordinates modulo the ring.
  std::size_t cell_of(const GroupElement& g) const {
    if (family_.is_dihedral()) {
      auto [x, j] = tiling_.decompose(g);
      return site_index({x}) * cosets_ + j;
    }
    return site_index(g.coords());
  }

 private:
  GroupFamily family_;
  CosetTiling tiling_;
  std::vector<std::int64_t> extents_;
  std::vector<std::int64_t> offsets_;
  std::size_t sites_ = 0;
  std::size_t cosets_ = 1;
};

/// Amplitudes over a lattice; index = cell * coin_dim + component.
struct LatticeState {
  Lattice lattice;
  int coin_dim = 1;
  CVector amplitudes;

  std::size_t local_dim() const { return lattice.cosets() * static_cast<std::size_t>(coin_dim); }

  static LatticeState zero(const Lattice& lattice, int coin_dim) {
    LatticeState st{lattice, coin_dim, CVector::Zero(static_cast<Eigen::Index>(lattice.cell_count() * coin_dim))};
    return st;
  }

  /// Delta state at a site; `local` indexes coset * coin_dim + component.
  static LatticeState delta(const Lattice& lattice, int coin_dim, const std::vector<std::int64_t>& site, std::size_t local = 0) {
    auto st = zero(lattice, coin_dim);
    if (local >= st.local_dim()) throw Error(ErrorCode::kDimensionMismatch, "local index out of range");
    st.amplitudes[static_cast<Eigen::Index>(lattice.site_index(site) * st.local_dim() + local)] = 1.0;
    return st;
  }

  double norm() const { return amplitudes.norm(); }
};

/// Generic transition term: element h with matrix A_h.
struct WalkTerm {
  GroupElement element;
  CMatrix matrix;
};

inline std::vector<WalkTerm> walk_terms(const QuantumWalk& walk) {
  std::vector<WalkTerm> terms;
  for (std::size_t i = 0; i < walk.graph().size(); ++i) {
    terms.push_back({walk.graph().generators()[i].element, walk.transitions()[i]});
  }
  return terms;
}

/// psi'_g = sum_h A_h psi_{g h}, applied `steps` times.
inline LatticeState apply_terms(const std::vector<WalkTerm>& terms, int coin_dim, const LatticeState& state, int steps = 1) {
  if (state.coin_dim != coin_dim) throw Error(ErrorCode::kDimensionMismatch, "state coin dimension");
  const auto& lat = state.lattice;
  const std::size_t cells = lat.cell_count();
  if (static_cast<std::size_t>(state.amplitudes.size()) != cells * coin_dim) {
    throw Error(ErrorCode::kDimensionMismatch, "state size");
  }
  for (const auto& t : terms) {
    if (!(t.element.family() == lat.family())) throw Error(ErrorCode::kFamilyMismatch, "walk and lattice families differ");
    if (t.matrix.rows() != coin_dim) throw Error(ErrorCode::kDimensionMismatch, "term matrix size");
  }
  std::vector<std::vector<std::size_t>> nbr(cells, std::vector<std::size_t>(terms.size()));
  for (std::size_t c = 0; c < cells; ++c) {
    auto g = lat.element(c);
    for (std::size_t t = 0; t < terms.size(); ++t) nbr[c][t] = lat.cell_of(compose(g, terms[t].element));
  }
  LatticeState cur = state;
  LatticeState next = state;
  const auto s = static_cast<Eigen::Index>(coin_dim);
  for (int step = 0; step < steps; ++step) {
    next.amplitudes.setZero();
    for (std::size_t c = 0; c < cells; ++c) {
      auto out = next.amplitudes.segment(static_cast<Eigen::Index>(c) * s, s);
      for (std::size_t t = 0; t < terms.size(); ++t) {
        out.noalias() += terms[t].matrix * cur.amplitudes.segment(static_cast<Eigen::Index>(nbr[c][t]) * s, s);
      }
    }
    std::swap(cur.amplitudes, next.amplitudes);
  }
  return cur;
}

inline LatticeState evolve(const QuantumWalk& walk, const LatticeState& state, int steps) {
  if (steps < 0) throw Error(ErrorCode::kInvalidArgument, "negative step count");
  return apply_terms(walk_terms(walk), walk.coin_dim(), state, steps);
}

/// Largest site displacement produced by one generator, measured on the free
/// directions (or the H-coordinate of a dihedral tiling).
inline std::int64_t max_displacement(const QuantumWalk& walk, const std::optional<CosetTiling>& tiling = std::nullopt) {
  std::int64_t best = 0;
  const auto& fam = walk.graph().family();
  for (const auto& gen : walk.graph().generators()) {
    if (fam.is_dihedral()) {
      CosetTiling t = tiling ? *tiling : CosetTiling(fam, 0, 0);
      for (std::size_t j = 0; j < 2; ++j) {
        std::int64_t x = t.decompose(compose(t.representative(j), gen.element)).first;
        std::int64_t x0 = t.decompose(t.representative(j)).first;
        best = std::max<std::int64_t>(best, std::llabs(x - x0));
      }
    } else {
      for (auto v : gen.element.free_part()) best = std::max(best, static_cast<std::int64_t>(std::llabs(v)));
    }
  }
  return best;
}

/// Smallest ring size for which a wavefront started inside `width` sites cannot wrap.
inline std::int64_t no_wrap_ring_size(const QuantumWalk& walk, int steps, std::int64_t width = 1) {
  return 2 * static_cast<std::int64_t>(steps) * max_displacement(walk) + width + 1;
}

/// Probability per site with coin and coset traced out.
inline std::vector<double> position_distribution(const LatticeState& state) {
  std::vector<double> p(state.lattice.site_count(), 0.0);
  const auto loc = static_cast<Eigen::Index>(state.local_dim());
  for (std::size_t s = 0; s < p.size(); ++s) {
    p[s] = state.amplitudes.segment(static_cast<Eigen::Index>(s) * loc, loc).squaredNorm();
  }
  return p;
}

/// Probability per (site, local component), in state layout order.
inline std::vector<double> component_distribution(const LatticeState& state) {
  std::vector<double> p(static_cast<std::size_t>(state.amplitudes.size()));
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(state.amplitudes[i]);
  return p;
}

}  // namespace qw
