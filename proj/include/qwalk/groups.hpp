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
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/error.hpp"

namespace qw {

enum class FamilyKind {
  kFreeAbelian,             // Z^d
  kFiniteAbelianTimesFree,  // Z_{i1} x ... x Z_{in} x Z^d, n >= 1
  kInfiniteDihedral,        // Z x| Z_2
  kFiniteDihedral,          // Z_n x| Z_2
};

/// Tag for one of the supported group families.
class GroupFamily {
 public:
  GroupFamily() = default;

  static GroupFamily free_abelian(int d) {
    if (d < 0) throw Error(ErrorCode::kInvalidArgument, "free rank must be >= 0");
    GroupFamily f;
    f.kind_ = FamilyKind::kFreeAbelian;
    f.free_rank_ = d;
    return f;
  }

  /// Z_{i1} x ... x Z_{in} x Z^d. An empty torsion list yields Z^d.
  static GroupFamily abelian(std::vector<std::int64_t> torsion, int d) {
    if (torsion.empty()) return free_abelian(d);
    if (d < 0) throw Error(ErrorCode::kInvalidArgument, "free rank must be >= 0");
    for (auto i : torsion) {
      if (i < 2) throw Error(ErrorCode::kInvalidArgument, "cyclic factor orders must be >= 2");
    }
    GroupFamily f;
    f.kind_ = FamilyKind::kFiniteAbelianTimesFree;
    f.torsion_ = std::move(torsion);
    f.free_rank_ = d;
    return f;
  }

  static GroupFamily infinite_dihedral() {
    GroupFamily f;
    f.kind_ = FamilyKind::kInfiniteDihedral;
    return f;
  }

  /// Z_n x| Z_2. Any n >= 3 is a dihedral group; walk constructions impose n >= 4 themselves.
  static GroupFamily finite_dihedral(std::int64_t n) {
    if (n < 3) throw Error(ErrorCode::kInvalidArgument, "finite dihedral order must be >= 3");
    GroupFamily f;
    f.kind_ = FamilyKind::kFiniteDihedral;
    f.dihedral_order_ = n;
    return f;
  }

  FamilyKind kind() const { return kind_; }
  int free_rank() const { return free_rank_; }
  const std::vector<std::int64_t>& torsion() const { return torsion_; }
  /// n for the finite dihedral group, 0 for D_inf.
  std::int64_t dihedral_order() const { return dihedral_order_; }

  bool is_abelian() const {
    return kind_ == FamilyKind::kFreeAbelian || kind_ == FamilyKind::kFiniteAbelianTimesFree;
  }
  bool is_dihedral() const { return !is_abelian(); }
  bool is_finite() const {
    if (kind_ == FamilyKind::kFiniteDihedral) return true;
    return is_abelian() && free_rank_ == 0;
  }
  /// Length of the integer coordinate vector of an element.
  std::size_t coord_size() const { return is_abelian() ? torsion_.size() + free_rank_ : 1; }

  /// Text tag used by the presentation format.
  std::string tag() const {
    switch (kind_) {
      case FamilyKind::kFreeAbelian: return "free_abelian(" + std::to_string(free_rank_) + ")";
      case FamilyKind::kFiniteAbelianTimesFree: {
        std::string s = "abelian(";
        for (std::size_t l = 0; l < torsion_.size(); ++l) {
          if (l) s += ",";
          s += std::to_string(torsion_[l]);
        }
        return s + ";" + std::to_string(free_rank_) + ")";
      }
      case FamilyKind::kInfiniteDihedral: return "dihedral_inf";
      case FamilyKind::kFiniteDihedral: return "dihedral(" + std::to_string(dihedral_order_) + ")";
    }
    return "?";
  }

  friend bool operator==(const GroupFamily&, const GroupFamily&) = default;

 private:
  FamilyKind kind_ = FamilyKind::kFreeAbelian;
  std::vector<std::int64_t> torsion_;
  int free_rank_ = 0;
  std::int64_t dihedral_order_ = 0;
};

namespace detail {
inline std::int64_t mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}
}  // namespace detail

/// Element of a supported family, stored in normal form.
///
/// Abelian families: coordinates are the torsion residues followed by the free
/// integer vector. Dihedral families: a single rotation exponent n together
/// with a reflection bit eps, representing a^n r^eps.
class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement identity(const GroupFamily& family) {
    GroupElement g;
    g.family_ = family;
    g.coords_.assign(family.coord_size(), 0);
    return g;
  }

  static GroupElement abelian(const GroupFamily& family, std::vector<std::int64_t> coords) {
    if (!family.is_abelian()) throw Error(ErrorCode::kFamilyMismatch, "abelian element in " + family.tag());
    if (coords.size() != family.coord_size()) {
      throw Error(ErrorCode::kDimensionMismatch, "expected " + std::to_string(family.coord_size()) +
                                                     " coordinates for " + family.tag());
    }
    GroupElement g;
    g.family_ = family;
    g.coords_ = std::move(coords);
    g.normalize();
    return g;
  }

  static GroupElement dihedral(const GroupFamily& family, std::int64_t n, int eps) {
    if (!family.is_dihedral()) throw Error(ErrorCode::kFamilyMismatch, "dihedral element in " + family.tag());
    if (eps != 0 && eps != 1) throw Error(ErrorCode::kInvalidArgument, "reflection bit must be 0 or 1");
    GroupElement g;
    g.family_ = family;
    g.coords_ = {n};
    g.flip_ = eps;
    g.normalize();
    return g;
  }

  /// Builds an element from its textual payload: abelian coordinates, or (n, eps).
  static GroupElement from_payload(const GroupFamily& family, std::span<const std::int64_t> payload) {
    if (family.is_abelian()) return abelian(family, {payload.begin(), payload.end()});
    if (payload.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "dihedral payload is (n, eps)");
    return dihedral(family, payload[0], static_cast<int>(payload[1]));
  }

  const GroupFamily& family() const { return family_; }
  const std::vector<std::int64_t>& coords() const { return coords_; }

  std::span<const std::int64_t> torsion_part() const {
    return std::span<const std::int64_t>(coords_).first(family_.is_abelian() ? family_.torsion().size() : 0);
  }
  std::span<const std::int64_t> free_part() const {
    if (!family_.is_abelian()) return {};
    return std::span<const std::int64_t>(coords_).subspan(family_.torsion().size());
  }
  std::int64_t rotation() const { return family_.is_dihedral() ? coords_[0] : 0; }
  int reflection() const { return flip_; }

  std::vector<std::int64_t> payload() const {
    auto p = coords_;
    if (family_.is_dihedral()) p.push_back(flip_);
    return p;
  }

  bool is_identity() const {
    return flip_ == 0 && std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
  }

  std::string to_string() const {
    std::string s = "(";
    auto p = payload();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(p[i]);
    }
    return s + ")";
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.family_ == b.family_ && a.coords_ == b.coords_ && a.flip_ == b.flip_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.flip_ != b.flip_) return a.flip_ < b.flip_;
    return a.coords_ < b.coords_;
  }

  friend GroupElement compose(const GroupElement& g, const GroupElement& h);
  friend GroupElement inverse(const GroupElement& g);

 private:
  void normalize() {
    if (family_.is_abelian()) {
      const auto& t = family_.torsion();
      for (std::size_t l = 0; l < t.size(); ++l) coords_[l] = detail::mod(coords_[l], t[l]);
    } else if (family_.kind() == FamilyKind::kFiniteDihedral) {
      coords_[0] = detail::mod(coords_[0], family_.dihedral_order());
    }
  }

  GroupFamily family_;
  std::vector<std::int64_t> coords_;
  int flip_ = 0;
};

/// Group law. Dihedral: (n, e)(m, d) = (n + (-1)^e m, e xor d).
inline GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (!(g.family_ == h.family_)) {
    throw Error(ErrorCode::kFamilyMismatch, g.family_.tag() + " vs " + h.family_.tag());
  }
  GroupElement out = g;
  if (g.family_.is_abelian()) {
    for (std::size_t i = 0; i < out.coords_.size(); ++i) out.coords_[i] += h.coords_[i];
  } else {
    out.coords_[0] += (g.flip_ ? -h.coords_[0] : h.coords_[0]);
    out.flip_ = g.flip_ ^ h.flip_;
  }
  out.normalize();
  return out;
}

inline GroupElement inverse(const GroupElement& g) {
  GroupElement out = g;
  if (g.family_.is_abelian() || g.flip_ == 0) {
    for (auto& c : out.coords_) c = -c;
  }
  // reflections a^n r are involutions
  out.normalize();
  return out;
}

inline GroupElement power(const GroupElement& g, std::int64_t k) {
  GroupElement base = k < 0 ? inverse(g) : g;
  GroupElement out = GroupElement::identity(g.family());
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) out = compose(out, base);
  return out;
}

namespace detail {

inline std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  return s;
}

/// Splits a word such as "a^2 r", "b*c^-1" or "x1^(-3)" into (symbol, exponent) tokens.
inline std::vector<std::pair<std::string, std::int64_t>> tokenize_word(const std::string& word) {
  std::vector<std::pair<std::string, std::int64_t>> out;
  std::size_t i = 0;
  auto is_sym = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-'; };
  while (i < word.size()) {
    char c = word[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++i;
      continue;
    }
    if (!is_sym(c)) throw Error(ErrorCode::kParse, "unexpected '" + std::string(1, c) + "' in word '" + word + "'");
    std::size_t j = i;
    while (j < word.size() && is_sym(word[j]) && !(j > i && (word[j] == '+' || word[j] == '-'))) ++j;
    std::string sym = word.substr(i, j - i);
    std::int64_t e = 1;
    if (j < word.size() && word[j] == '^') {
      ++j;
      bool paren = j < word.size() && word[j] == '(';
      if (paren) ++j;
      std::size_t k = j;
      if (k < word.size() && (word[k] == '-' || word[k] == '+')) ++k;
      while (k < word.size() && std::isdigit(static_cast<unsigned char>(word[k]))) ++k;
      if (k == j) throw Error(ErrorCode::kParse, "missing exponent in word '" + word + "'");
      e = std::stoll(word.substr(j, k - j));
      j = k;
      if (paren) {
        if (j >= word.size() || word[j] != ')') throw Error(ErrorCode::kParse, "unbalanced exponent in '" + word + "'");
        ++j;
      }
    }
    out.emplace_back(sym, e);
    i = j;
  }
  return out;
}

}  // namespace detail

/// Evaluates a word over the canonical alphabet of a family.
///
/// Dihedral alphabet: a, r. Abelian alphabet: t1..tn for the cyclic factors,
/// x1..xd for the free factors. "e" denotes the identity in every family.
inline GroupElement parse_word(const GroupFamily& family, const std::string& word) {
  GroupElement g = GroupElement::identity(family);
  for (const auto& [sym, e] : detail::tokenize_word(word)) {
    GroupElement letter;
    if (sym == "e") {
      letter = GroupElement::identity(family);
    } else if (family.is_dihedral() && sym == "a") {
      letter = GroupElement::dihedral(family, 1, 0);
    } else if (family.is_dihedral() && sym == "r") {
      letter = GroupElement::dihedral(family, 0, 1);
    } else if (family.is_abelian() && sym.size() >= 2 && (sym[0] == 't' || sym[0] == 'x') &&
               std::all_of(sym.begin() + 1, sym.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      std::size_t idx = std::stoul(sym.substr(1));
      std::size_t n = family.torsion().size();
      std::size_t limit = sym[0] == 't' ? n : static_cast<std::size_t>(family.free_rank());
      if (idx < 1 || idx > limit) throw Error(ErrorCode::kParse, "letter '" + sym + "' out of range for " + family.tag());
      std::vector<std::int64_t> c(family.coord_size(), 0);
      c[(sym[0] == 't' ? 0 : n) + idx - 1] = 1;
      letter = GroupElement::abelian(family, c);
    } else {
      throw Error(ErrorCode::kParse, "unknown letter '" + sym + "' for " + family.tag());
    }
    g = compose(g, power(letter, e));
  }
  return g;
}

struct Generator {
  std::string label;
  GroupElement element;
};

namespace detail {

/// True when the integer row vectors span Z^dim (echelon form with unit pivots).
inline bool spans_integer_lattice(std::vector<std::vector<std::int64_t>> rows, std::size_t dim) {
  std::size_t pivot = 0;
  for (std::size_t col = 0; col < dim; ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t r = pivot; r < rows.size(); ++r) {
        if (rows[r][col] != 0 && (best == rows.size() || std::llabs(rows[r][col]) < std::llabs(rows[best][col]))) best = r;
      }
      if (best == rows.size()) return false;
      std::swap(rows[pivot], rows[best]);
      bool done = true;
      for (std::size_t r = pivot + 1; r < rows.size(); ++r) {
        if (rows[r][col] == 0) continue;
        std::int64_t q = rows[r][col] / rows[pivot][col];
        for (std::size_t c = col; c < dim; ++c) rows[r][c] -= q * rows[pivot][c];
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (std::llabs(rows[pivot][col]) != 1) return false;
    ++pivot;
  }
  return true;
}

}  // namespace detail

/// True when the elements generate the whole group of their family.
inline bool generates_group(const GroupFamily& family, const std::vector<GroupElement>& elements) {
  if (family.is_abelian()) {
    std::size_t dim = family.coord_size();
    if (dim == 0) return true;
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& g : elements) rows.push_back(g.coords());
    for (std::size_t l = 0; l < family.torsion().size(); ++l) {
      std::vector<std::int64_t> rel(dim, 0);
      rel[l] = family.torsion()[l];
      rows.push_back(rel);
    }
    return detail::spans_integer_lattice(std::move(rows), dim);
  }
  // <S> = <a^g> u <a^g> a^n0 r when S contains a reflection a^n0 r; g collects
  // rotation exponents and pairwise reflection offsets.
  std::int64_t g = family.dihedral_order();
  std::optional<std::int64_t> first_reflection;
  bool any_reflection = false;
  for (const auto& e : elements) {
    if (e.reflection()) {
      any_reflection = true;
      if (!first_reflection) first_reflection = e.rotation();
      g = std::gcd(g, e.rotation() - *first_reflection);
    } else {
      g = std::gcd(g, e.rotation());
    }
  }
  return any_reflection && std::llabs(g) == 1;
}

/// Generating set with labels and documented relators.
class CayleyGraph {
 public:
  CayleyGraph() = default;

  /// Validates and stores a labelled generating set. The identity is only
  /// admitted under the label "e"; distinct labels must name distinct elements.
  static CayleyGraph build(const GroupFamily& family, std::vector<Generator> generators,
                           std::vector<std::string> relators = {}, bool require_generation = true) {
    if (generators.empty()) throw Error(ErrorCode::kInvalidArgument, "empty generating set");
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const auto& g = generators[i];
      if (!(g.element.family() == family)) throw Error(ErrorCode::kFamilyMismatch, "generator " + g.label);
      if (g.label.empty()) throw Error(ErrorCode::kInvalidArgument, "empty generator label");
      if (g.element.is_identity() && g.label != "e") {
        throw Error(ErrorCode::kIdentityGenerator, "generator '" + g.label + "' is the identity");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (generators[j].label == g.label) throw Error(ErrorCode::kDuplicateGenerator, "label " + g.label);
        if (generators[j].element == g.element) {
          throw Error(ErrorCode::kDuplicateGenerator, generators[j].label + " and " + g.label + " coincide");
        }
      }
    }
    CayleyGraph graph;
    graph.family_ = family;
    graph.generators_ = std::move(generators);
    if (require_generation) {
      std::vector<GroupElement> els;
      for (const auto& g : graph.generators_) els.push_back(g.element);
      if (!generates_group(family, els)) throw Error(ErrorCode::kNotGenerating, "generators do not generate " + family.tag());
    }
    for (const auto& rel : relators) {
      if (!graph.evaluate(rel).is_identity()) throw Error(ErrorCode::kRelatorViolation, "'" + rel + "' is not trivial");
    }
    graph.relators_ = std::move(relators);
    return graph;
  }

  /// Same as build(), with each generator given as a word over the family alphabet.
  static CayleyGraph from_words(const GroupFamily& family,
                                const std::vector<std::pair<std::string, std::string>>& words,
                                std::vector<std::string> relators = {}, bool require_generation = true) {
    std::vector<Generator> gens;
    for (const auto& [label, word] : words) gens.push_back({label, parse_word(family, word)});
    return build(family, std::move(gens), std::move(relators), require_generation);
  }

  const GroupFamily& family() const { return family_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<std::string>& relators() const { return relators_; }
  std::size_t size() const { return generators_.size(); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (generators_[i].label == label) return i;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> find(const GroupElement& g) const {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (generators_[i].element == g) return i;
    }
    return std::nullopt;
  }

  /// Evaluates a word over generator labels, e.g. "b d a_inv" or "a^-2".
  GroupElement evaluate(const std::string& word) const {
    GroupElement g = GroupElement::identity(family_);
    for (const auto& [sym, e] : detail::tokenize_word(word)) {
      auto idx = index_of(sym);
      if (!idx) throw Error(ErrorCode::kParse, "unknown generator '" + sym + "' in relator");
      g = compose(g, power(generators_[*idx].element, e));
    }
    return g;
  }

  /// S+ equals the set of inverses S-.
  bool is_symmetric() const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [&](const Generator& g) { return find(inverse(g.element)).has_value(); });
  }
  bool is_monoidal() const { return !is_symmetric(); }

 private:
  GroupFamily family_;
  std::vector<Generator> generators_;
  std::vector<std::string> relators_;
};

/// Right-coset decomposition G = H c1 u H c2 with H = <a>, c1 = a^m, c2 = a^m' r.
class CosetTiling {
 public:
  CosetTiling() = default;
  CosetTiling(const GroupFamily& family, std::int64_t m, std::int64_t m_prime)
      : family_(family), m_(m), m_prime_(m_prime) {
    if (!family.is_dihedral()) throw Error(ErrorCode::kFamilyMismatch, "coset tiling needs a dihedral family");
    reps_ = {GroupElement::dihedral(family, m, 0), GroupElement::dihedral(family, m_prime, 1)};
  }

  const GroupFamily& family() const { return family_; }
  std::int64_t m() const { return m_; }
  std::int64_t m_prime() const { return m_prime_; }
  std::size_t index() const { return 2; }
  const std::vector<GroupElement>& representatives() const { return reps_; }
  const GroupElement& representative(std::size_t j) const { return reps_.at(j); }

  /// Coset index j (0-based) with g in H c_j.
  std::size_t coset_of(const GroupElement& g) const { return static_cast<std::size_t>(g.reflection()); }

  /// (x, j) with g = a^x c_j.
  std::pair<std::int64_t, std::size_t> decompose(const GroupElement& g) const {
    if (!(g.family() == family_)) throw Error(ErrorCode::kFamilyMismatch, "element outside tiling family");
    std::size_t j = coset_of(g);
    std::int64_t x = g.rotation() - (j == 0 ? m_ : m_prime_);
    if (family_.kind() == FamilyKind::kFiniteDihedral) x = detail::mod(x, family_.dihedral_order());
    return {x, j};
  }

  GroupElement element(std::int64_t x, std::size_t j) const {
    return compose(GroupElement::dihedral(family_, x, 0), reps_.at(j));
  }

 private:
  GroupFamily family_;
  std::int64_t m_ = 0;
  std::int64_t m_prime_ = 0;
  std::vector<GroupElement> reps_;
};

/// Tiling by H = <a> with c1 = a^m, c2 = a^m' r (defaults to c1 = e, c2 = r).
inline CosetTiling default_tiling(const CayleyGraph& graph, std::int64_t m = 0, std::int64_t m_prime = 0) {
  if (!graph.family().is_dihedral()) {
    throw Error(ErrorCode::kFamilyMismatch, "coset tiling requires a dihedral family, got " + graph.family().tag());
  }
  return CosetTiling(graph.family(), m, m_prime);
}

}  // namespace qw
