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
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "qwalk/coarse_grain.hpp"
#include "qwalk/least_squares.hpp"
#include "qwalk/momentum.hpp"

namespace qw {

enum class DihedralCase { kMuZero, kZeZero, kZdZero, kGeneric };

inline const char* to_string(DihedralCase c) {
  switch (c) {
    case DihedralCase::kMuZero: return "mu0";
    case DihedralCase::kZeZero: return "ze0";
    case DihedralCase::kZdZero: return "zd0";
    case DihedralCase::kGeneric: return "generic";
  }
  return "?";
}

inline DihedralCase parse_dihedral_case(const std::string& s) {
  if (s == "mu0") return DihedralCase::kMuZero;
  if (s == "ze0") return DihedralCase::kZeZero;
  if (s == "zd0") return DihedralCase::kZdZero;
  if (s == "generic") return DihedralCase::kGeneric;
  throw Error(ErrorCode::kParse, "unknown case '" + s + "' (expected generic, mu0, ze0 or zd0)");
}

/// Parameters of the four closed-form scalar walk families on the graph
/// {a, a^-1, b, c, d, e}. nu = sqrt(1 - mu^2).
struct DihedralParams {
  DihedralCase kase = DihedralCase::kGeneric;
  double p = 0.5;
  double q = 0.5;
  double mu = 0.0;
  int s1 = 1;
  int s2 = 1;
  int s3 = 1;
  /// Global phase applied to every scalar.
  double phase = 0.0;

  double nu() const { return std::sqrt(1.0 - mu * mu); }
  double alpha() const { return std::sqrt(p) * std::sqrt(1.0 - q) - s2 * std::sqrt(1.0 - p) * std::sqrt(q); }
  double beta() const { return std::abs(s2 * std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q))); }

  /// Throws kConstraint when the parameters leave the family.
  void validate(double tol = 1e-12) const {
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::kConstraint, std::string("case ") + to_string(kase) + ": " + what);
    };
    for (int s : {s1, s2, s3}) {
      if (s != 1 && s != -1) fail("signs must be +1 or -1");
    }
    if (!(p > 0.0 && p < 1.0)) fail("p must lie in (0, 1)");
    if (!(q > 0.0 && q < 1.0)) fail("q must lie in (0, 1)");
    if (!std::isfinite(phase)) fail("phase must be finite");
    if (kase == DihedralCase::kMuZero) {
      if (mu != 0.0) fail("mu must be 0");
      return;
    }
    if (!(mu > 0.0 && mu < 1.0)) fail("mu must lie in (0, 1)");
    switch (kase) {
      case DihedralCase::kZeZero:
        if (s2 != 1) fail("s2 must be +1");
        if (std::abs(q - p) > tol) fail("q must equal p");
        break;
      case DihedralCase::kZdZero:
        if (s2 != -1) fail("s2 must be -1");
        if (std::abs(q - (1.0 - p)) > tol) fail("q must equal 1 - p");
        break;
      default:
        if (s2 == 1 && !(p > q)) fail("p > q required when s2 = +1");
        if (s2 == -1 && !(1.0 - q > p)) fail("1 - q > p required when s2 = -1");
        break;
    }
  }
};

/// Transition scalars in the order a, a^-1, b, c, d, e.
struct DihedralScalars {
  cplx za, za_inv, zb, zc, zd, ze;
};

inline DihedralScalars dihedral_scalars(const DihedralParams& prm) {
  prm.validate();
  const double p = prm.p, q = prm.q, mu = prm.mu, nu = prm.nu();
  const double s1 = prm.s1, s2 = prm.s2, s3 = prm.s3;
  const double sp = std::sqrt(p), sq = std::sqrt(q), cp = std::sqrt(1.0 - p), cq = std::sqrt(1.0 - q);
  DihedralScalars z{};
  switch (prm.kase) {
    case DihedralCase::kMuZero:
      z.za = sp * sq;
      z.za_inv = s2 * cp * cq;
      z.zb = s2 * s1 * kI * sp * cq;
      z.zc = -s1 * kI * cp * sq;
      break;
    case DihedralCase::kZeZero:
      z.za = nu * p;
      z.za_inv = nu * (1.0 - p);
      z.zb = s1 * kI * nu * sp * cp;
      z.zc = -s1 * kI * nu * sp * cp;
      z.zd = s3 * kI * mu;
      break;
    case DihedralCase::kZdZero:
      z.za = nu * sp * cp;
      z.za_inv = -nu * sp * cp;
      z.zb = -s1 * kI * nu * p;
      z.zc = -s1 * kI * nu * (1.0 - p);
      z.ze = -s1 * s3 * mu;
      break;
    case DihedralCase::kGeneric:
      z.za = nu * sp * sq;
      z.za_inv = s2 * nu * cp * cq;
      z.zb = s2 * s1 * kI * nu * sp * cq;
      z.zc = -s1 * kI * nu * cp * sq;
      z.ze = -s1 * s3 * mu * prm.alpha();
      z.zd = s3 * kI * mu * prm.beta();
      break;
  }
  const cplx g = std::polar(1.0, prm.phase);
  for (cplx* v : {&z.za, &z.za_inv, &z.zb, &z.zc, &z.zd, &z.ze}) *v *= g;
  return z;
}

/// Draws valid parameters for a case. With probability 1/5 each of p, q and
/// mu is pushed to within 1e-6 of an end of its range.
inline DihedralParams sample_dihedral_params(DihedralCase kase, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution edge(0.2), coin(0.5);
  auto draw = [&](double lo, double hi) {
    if (edge(rng)) return coin(rng) ? lo + 1e-6 * (hi - lo) : hi - 1e-6 * (hi - lo);
    return lo + (hi - lo) * (0.001 + 0.998 * u(rng));
  };
  DihedralParams prm;
  prm.kase = kase;
  prm.s1 = coin(rng) ? 1 : -1;
  prm.s2 = coin(rng) ? 1 : -1;
  prm.s3 = coin(rng) ? 1 : -1;
  prm.phase = 2.0 * kPi * u(rng) - kPi;
  prm.p = draw(0.0, 1.0);
  prm.mu = kase == DihedralCase::kMuZero ? 0.0 : draw(0.0, 1.0);
  switch (kase) {
    case DihedralCase::kMuZero: prm.q = draw(0.0, 1.0); break;
    case DihedralCase::kZeZero:
      prm.s2 = 1;
      prm.q = prm.p;
      break;
    case DihedralCase::kZdZero:
      prm.s2 = -1;
      prm.q = 1.0 - prm.p;
      break;
    case DihedralCase::kGeneric:
      prm.q = prm.s2 == 1 ? draw(0.0, prm.p) : draw(0.0, 1.0 - prm.p);
      break;
  }
  return prm;
}

/// The graph a=(1,0), a_inv=(-1,0), b=ar, c=a^-1 r, optionally d=r and a loop e.
inline CayleyGraph dihedral_cayley_graph(bool with_d = true, bool with_e = false,
                              const GroupFamily& family = GroupFamily::infinite_dihedral()) {
  if (!family.is_dihedral()) throw Error(ErrorCode::kFamilyMismatch, "dihedral family expected");
  std::vector<Generator> g{{"a", GroupElement::dihedral(family, 1, 0)},
                           {"a_inv", GroupElement::dihedral(family, -1, 0)},
                           {"b", GroupElement::dihedral(family, 1, 1)},
                           {"c", GroupElement::dihedral(family, -1, 1)}};
  if (with_d) g.push_back({"d", GroupElement::dihedral(family, 0, 1)});
  if (with_e) g.push_back({"e", GroupElement::identity(family)});
  std::vector<std::string> rels{"a a_inv", "b^2", "c^2"};
  if (with_d) {
    rels.push_back("b d a_inv");
    rels.push_back("c d a");
  }
  for (const char* r : {"b a b^-1 a", "c a c^-1 a", "b c a^-2"}) rels.push_back(r);
  return CayleyGraph::build(family, std::move(g), std::move(rels));
}

namespace detail {
inline QuantumWalk dihedral_walk_on(const DihedralParams& prm, const GroupFamily& family) {
  auto z = dihedral_scalars(prm);
  const bool with_d = z.zd != 0.0;
  const bool with_e = z.ze != 0.0;
  std::vector<cplx> s{z.za, z.za_inv, z.zb, z.zc};
  if (with_d) s.push_back(z.zd);
  if (with_e) s.push_back(z.ze);
  return QuantumWalk::scalar(dihedral_cayley_graph(with_d, with_e, family), s);
}
}  // namespace detail

/// Scalar walk of the given family on D_inf. Generators whose scalar vanishes
/// identically in the case (d and/or e) are left out of the graph.
inline QuantumWalk make_dihedral_walk(const DihedralParams& prm) {
  return detail::dihedral_walk_on(prm, GroupFamily::infinite_dihedral());
}

/// Same scalars on Z_n x| Z_2 (a^n = e).
inline QuantumWalk instantiate_finite_dihedral(const DihedralParams& prm, std::int64_t n) {
  if (n < 4) throw Error(ErrorCode::kConstraint, "finite dihedral instantiation needs n >= 4, got " + std::to_string(n));
  return detail::dihedral_walk_on(prm, GroupFamily::finite_dihedral(n));
}

/// Relabels every reflection a^n r as a^{n+t} r, keeping labels, scalars and
/// relators. The result coarse-grains under the tiling (a^m, a^{m+t} r)
/// exactly as the input does under (a^m, a^m r).
inline QuantumWalk translate_reflections(const QuantumWalk& walk, std::int64_t t) {
  const auto& fam = walk.graph().family();
  if (!fam.is_dihedral()) throw Error(ErrorCode::kFamilyMismatch, "dihedral walk expected");
  auto gens = walk.graph().generators();
  for (auto& g : gens) {
    if (g.element.reflection()) g.element = GroupElement::dihedral(fam, g.element.rotation() + t, 1);
  }
  return QuantumWalk(CayleyGraph::build(fam, std::move(gens), walk.graph().relators()), walk.coin_dim(),
                     walk.transitions());
}

// ---------------------------------------------------------------------------
// Graph enumeration

struct AdmissibleGraph {
  CayleyGraph graph;
  /// Tiling offset t (c2 = a^t r) under which every generator coarse-grains into {e, a, a^-1}.
  std::int64_t tiling_offset = 0;
  bool has_inverse_pair = false;
};

enum class CandidateVerdict { kAdmissible, kNotGenerating, kCoordination, kNotQuadrangular };

inline const char* to_string(CandidateVerdict v) {
  switch (v) {
    case CandidateVerdict::kAdmissible: return "admissible";
    case CandidateVerdict::kNotGenerating: return "does not generate";
    case CandidateVerdict::kCoordination: return "coarse-grained coordination exceeds two";
    case CandidateVerdict::kNotQuadrangular: return "not quadrangular";
  }
  return "?";
}

namespace detail {

inline std::string reflection_label(std::int64_t n) {
  if (n == 1) return "b";
  if (n == -1) return "c";
  if (n == 0) return "d";
  return n > 0 ? "a" + std::to_string(n) + "r" : "am" + std::to_string(-n) + "r";
}

inline std::string rotation_label(std::int64_t n) {
  if (n == 0) return "e";
  if (n == 1) return "a";
  if (n == -1) return "a_inv";
  return n > 0 ? "a" + std::to_string(n) : "am" + std::to_string(-n);
}

inline Generator label_element(const GroupElement& g) {
  return {g.reflection() ? reflection_label(g.rotation()) : rotation_label(g.rotation()), g};
}

/// Smallest t such that all generators coarse-grain to shifts in {-1, 0, 1}
/// under the tiling (e, a^t r); nullopt when none exists in [lo, hi].
inline std::optional<std::int64_t> coordination_offset(const std::vector<GroupElement>& s, std::int64_t lo,
                                                       std::int64_t hi) {
  for (std::int64_t t = lo; t <= hi; ++t) {
    CosetTiling tiling(s.front().family(), 0, t);
    bool ok = true;
    for (const auto& h : s) {
      for (std::size_t j = 0; j < 2 && ok; ++j) {
        const auto& cj = tiling.representative(j);
        auto ct = tiling.representative(tiling.coset_of(compose(cj, inverse(h))));
        auto r = compose(compose(ct, h), inverse(cj)).rotation();
        ok = r >= -1 && r <= 1;
      }
    }
    if (ok) return t;
  }
  return std::nullopt;
}

}  // namespace detail

/// Runs the three admissibility filters on one generating set in D_inf.
inline CandidateVerdict classify_candidate(const std::vector<GroupElement>& s, std::int64_t search_radius = 64) {
  if (s.empty() || !generates_group(s.front().family(), s)) return CandidateVerdict::kNotGenerating;
  std::int64_t lo = 0, hi = 0;
  for (const auto& g : s) {
    lo = std::min(lo, g.rotation() - 1);
    hi = std::max(hi, g.rotation() + 1);
  }
  if (!detail::coordination_offset(s, std::max(lo, -search_radius), std::min(hi, search_radius))) {
    return CandidateVerdict::kCoordination;
  }
  std::vector<Generator> gens;
  for (const auto& g : s) gens.push_back(detail::label_element(g));
  auto graph = CayleyGraph::build(s.front().family(), gens, {}, false);
  if (!check_quadrangularity(graph).passed) return CandidateVerdict::kNotQuadrangular;
  return CandidateVerdict::kAdmissible;
}

/// Searches subsets of {e, a, a^-1} u {a^n r : |n - center| <= max_n} for
/// generating sets of D_inf whose coarse-graining has coordination at most
/// two and that are quadrangular. Survivors are reported once per class of
/// reflection-offset translations, shifted so the offsets are centred on 0.
inline std::vector<AdmissibleGraph> enumerate_admissible_graphs(std::int64_t max_n, std::int64_t center = 0) {
  if (max_n < 0 || max_n > 6) throw Error(ErrorCode::kInvalidArgument, "max_n must lie in [0, 6]");
  const auto fam = GroupFamily::infinite_dihedral();
  std::vector<GroupElement> pool{GroupElement::identity(fam), GroupElement::dihedral(fam, 1, 0),
                                 GroupElement::dihedral(fam, -1, 0)};
  for (std::int64_t n = center - max_n; n <= center + max_n; ++n) pool.push_back(GroupElement::dihedral(fam, n, 1));

  std::set<std::vector<GroupElement>> seen;
  std::vector<AdmissibleGraph> out;
  const std::size_t total = std::size_t{1} << pool.size();
  for (std::size_t mask = 1; mask < total; ++mask) {
    std::vector<GroupElement> s;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(pool[i]);
    }
    if (classify_candidate(s) != CandidateVerdict::kAdmissible) continue;
    std::int64_t lo = INT64_MAX, hi = INT64_MIN;
    for (const auto& g : s) {
      if (g.reflection()) {
        lo = std::min(lo, g.rotation());
        hi = std::max(hi, g.rotation());
      }
    }
    const std::int64_t shift = static_cast<std::int64_t>(std::floor((lo + hi) / 2.0));
    std::vector<GroupElement> canon;
    for (const auto& g : s) canon.push_back(g.reflection() ? GroupElement::dihedral(fam, g.rotation() - shift, 1) : g);
    std::sort(canon.begin(), canon.end());
    if (!seen.insert(canon).second) continue;
    // Order: a, a_inv, b, c, d, other reflections, e.
    std::vector<Generator> gens;
    bool has_a = false, has_a_inv = false;
    for (const auto& g : canon) {
      if (!g.reflection() && g.rotation() == 1) has_a = true;
      if (!g.reflection() && g.rotation() == -1) has_a_inv = true;
    }
    if (has_a) gens.push_back(detail::label_element(GroupElement::dihedral(fam, 1, 0)));
    if (has_a_inv) gens.push_back(detail::label_element(GroupElement::dihedral(fam, -1, 0)));
    std::vector<GroupElement> refl;
    for (const auto& g : canon) {
      if (g.reflection()) refl.push_back(g);
    }
    auto rank = [](std::int64_t n) { return n == 1 ? -3 : (n == -1 ? -2 : (n == 0 ? -1 : n + 100)); };
    std::sort(refl.begin(), refl.end(),
              [&](const GroupElement& x, const GroupElement& y) { return rank(x.rotation()) < rank(y.rotation()); });
    for (const auto& g : refl) gens.push_back(detail::label_element(g));
    if (std::any_of(canon.begin(), canon.end(), [](const GroupElement& g) { return g.is_identity(); })) {
      gens.push_back(detail::label_element(GroupElement::identity(fam)));
    }
    AdmissibleGraph ag;
    ag.tiling_offset = *detail::coordination_offset(canon, -2, 2);
    ag.has_inverse_pair = has_a && has_a_inv;
    ag.graph = CayleyGraph::build(fam, std::move(gens));
    out.push_back(std::move(ag));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spinorial walks on Z: canonical form, parity and dispersion parameters

namespace detail {

struct SpinorCoefficients {
  Mat2 plus, minus, zero;
};

inline SpinorCoefficients spinor_coefficients(const QuantumWalk& walk) {
  if (walk.coin_dim() != 2) throw Error(ErrorCode::kDimensionMismatch, "spinorial walk with s = 2 expected");
  const auto& fam = walk.graph().family();
  if (fam.kind() != FamilyKind::kFreeAbelian || fam.free_rank() != 1) {
    throw Error(ErrorCode::kFamilyMismatch, "walk on Z expected, got " + fam.tag());
  }
  SpinorCoefficients c{Mat2::Zero(), Mat2::Zero(), Mat2::Zero()};
  const auto& gens = walk.graph().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto x = gens[i].element.coords()[0];
    const Mat2 m = walk.transitions()[i];
    if (x == 1) c.plus += m;
    else if (x == -1) c.minus += m;
    else if (x == 0) c.zero += m;
    else if (m.norm() > 0.0) throw Error(ErrorCode::kNotInClass, "generator shift " + std::to_string(x) + " outside {-1, 0, 1}");
  }
  return c;
}

inline double coefficient_distance(const SpinorCoefficients& a, const SpinorCoefficients& b) {
  return (a.plus - b.plus).norm() + (a.minus - b.minus).norm() + (a.zero - b.zero).norm();
}

inline Mat2 projector0() {
  Mat2 m = Mat2::Zero();
  m(0, 0) = 1.0;
  return m;
}
inline Mat2 projector1() {
  Mat2 m = Mat2::Zero();
  m(1, 1) = 1.0;
  return m;
}

/// Coefficients of g U e^{i theta sx} A^D e^{i theta' sx} U^dagger.
inline SpinorCoefficients canonical_coefficients(double theta, double theta_prime, double nu, double s_mu, const Mat2& u,
                                                 cplx g) {
  const Mat2 l = exp_i_sigma_x(theta), r = exp_i_sigma_x(theta_prime);
  SpinorCoefficients c;
  c.plus = g * u * l * (nu * projector0()) * r * u.adjoint();
  c.minus = g * u * l * (nu * projector1()) * r * u.adjoint();
  c.zero = g * u * l * (kI * s_mu * pauli::x()) * r * u.adjoint();
  return c;
}

inline SpinorCoefficients scaled(const SpinorCoefficients& c, cplx f) { return {f * c.plus, f * c.minus, f * c.zero}; }

}  // namespace detail

/// Scalar-family parameters read back from a canonical form with U = I.
struct FamilyMatch {
  DihedralCase kase = DihedralCase::kGeneric;
  DihedralParams params;
  /// The parameters satisfy the case's open-range conditions.
  bool open_ranges = false;
};

/// A_k = e^{i chi} U e^{i theta sx} A^D_k e^{i theta' sx} U^dagger with
/// A^D_k = [[nu e^{-ik}, i s mu], [i s mu, nu e^{ik}]].
struct CanonicalForm {
  double theta = 0.0;
  double theta_prime = 0.0;
  double nu = 1.0;
  double mu = 0.0;
  int s = 1;
  Mat2 u = Mat2::Identity();
  /// Global phase chi.
  double phase = 0.0;
  /// True when U = I reproduces the walk; otherwise theta' is gauge-fixed to 0.
  bool identity_basis = false;
  /// Sum of Frobenius errors over the three coefficient matrices (bounds max_k ||A_k - A'_k||).
  double residual = 0.0;
  std::optional<FamilyMatch> closed_form;
};

namespace detail {

inline Mat2 normalize_basis(Mat2 u) {
  if (std::abs(u(0, 0)) > 1e-14) u *= std::polar(1.0, -std::arg(u(0, 0)));
  else if (std::abs(u(0, 1)) > 1e-14) u *= std::polar(1.0, -std::arg(u(0, 1)));
  return u;
}

inline int sign_of(double x) { return x < 0.0 ? -1 : 1; }

/// Attempt with U = I on an SU(2)-gauged coefficient triple.
inline std::optional<CanonicalForm> canonical_identity_basis(const SpinorCoefficients& b) {
  Eigen::JacobiSVD<Mat2> svd(b.plus, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double nu = svd.singularValues()(0);
  CanonicalForm cf;
  cf.identity_basis = true;
  if (nu < 1e-12) {
    // Constant walk: i s sx e^{i theta' sx} with theta = 0.
    const Mat2 w = -kI * pauli::x() * b.zero;  // = s e^{i theta' sx}
    cf.nu = 0.0;
    cf.mu = 1.0;
    cf.theta_prime = std::atan2(w(1, 0).imag(), w(0, 0).real());
  } else {
    Eigen::Vector2cd col = svd.matrixU().col(0);
    if (std::abs(col(0)) > 1e-14) col *= std::polar(1.0, -std::arg(col(0)));
    else col *= std::polar(1.0, std::arg(kI) - std::arg(col(1)));
    const Eigen::RowVector2cd row = col.adjoint() * b.plus / nu;
    cf.nu = nu;
    cf.theta = std::atan2(col(1).imag(), col(0).real());
    cf.theta_prime = std::atan2(row(1).imag(), row(0).real());
    const Mat2 m = kI * pauli::x() * exp_i_sigma_x(cf.theta + cf.theta_prime);
    const double s_mu = 0.5 * (m.adjoint() * b.zero).trace().real();
    cf.mu = std::abs(s_mu);
    cf.s = sign_of(s_mu);
  }
  cf.residual = coefficient_distance(b, canonical_coefficients(cf.theta, cf.theta_prime, cf.nu, cf.s * cf.mu,
                                                                Mat2::Identity(), 1.0));
  return cf;
}

/// Attempt with a general basis, theta' = 0.
inline std::optional<CanonicalForm> canonical_general_basis(const SpinorCoefficients& b) {
  const Mat2 sum = b.plus + b.minus;
  const double nu2 = (sum.adjoint() * b.plus).trace().real();
  if (nu2 < 1e-20) return std::nullopt;
  const Mat2 proj = sum.adjoint() * b.plus / nu2;
  Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (proj + proj.adjoint()));
  Eigen::Vector2cd v = es.eigenvectors().col(1);
  Mat2 v0;
  v0.col(0) = v;
  v0(0, 1) = -std::conj(v(1));
  v0(1, 1) = std::conj(v(0));
  const Mat2 xp = v0.adjoint() * b.plus * v0;
  const Mat2 x0 = v0.adjoint() * b.zero * v0;
  cplx eig{1.0, 0.0};
  if (std::abs(xp(1, 0)) >= std::abs(x0(0, 1)) && std::abs(xp(1, 0)) > 1e-14) {
    eig = xp(1, 0) / (kI * std::abs(xp(1, 0)));
  } else if (std::abs(x0(0, 1)) > 1e-14) {
    eig = std::conj(x0(0, 1) / (kI * std::abs(x0(0, 1))));
  }
  Mat2 d = Mat2::Identity();
  d(1, 1) = eig;
  const Mat2 u = v0 * d;
  const Mat2 yp = u.adjoint() * b.plus * u;
  const Mat2 y0 = u.adjoint() * b.zero * u;
  CanonicalForm cf;
  cf.nu = std::sqrt(nu2);
  cf.theta = std::atan2(yp(1, 0).imag(), yp(0, 0).real());
  cf.theta_prime = 0.0;
  const Mat2 m = kI * pauli::x() * exp_i_sigma_x(cf.theta);
  const double s_mu = 0.5 * (m.adjoint() * y0).trace().real();
  cf.mu = std::abs(s_mu);
  cf.s = sign_of(s_mu);
  cf.u = normalize_basis(u);
  cf.residual = coefficient_distance(b, canonical_coefficients(cf.theta, 0.0, cf.nu, cf.s * cf.mu, cf.u, 1.0));
  return cf;
}

inline Mat2 su2_from_angles(double a, double b, double c) {
  Mat2 ea = Mat2::Zero(), ec = Mat2::Zero(), eb;
  ea(0, 0) = std::polar(1.0, a);
  ea(1, 1) = std::polar(1.0, -a);
  ec(0, 0) = std::polar(1.0, c);
  ec(1, 1) = std::polar(1.0, -c);
  eb << std::cos(b), -std::sin(b), std::sin(b), std::cos(b);
  return ea * eb * ec;
}

/// Least-squares fit of (phi, eta, a, b, c, chi) with nu = cos eta, s mu = sin eta.
inline std::optional<CanonicalForm> canonical_least_squares(const SpinorCoefficients& raw) {
  auto model = [](const Eigen::VectorXd& x) {
    return canonical_coefficients(x[0], 0.0, std::cos(x[1]), std::sin(x[1]), su2_from_angles(x[2], x[3], x[4]),
                                  std::polar(1.0, x[5]));
  };
  ResidualFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    auto m = model(x);
    int k = 0;
    for (const auto* pair : {&m.plus, &m.minus, &m.zero}) {
      const Mat2& target = pair == &m.plus ? raw.plus : (pair == &m.minus ? raw.minus : raw.zero);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          cplx dlt = (*pair)(i, j) - target(i, j);
          r[k++] = dlt.real();
          r[k++] = dlt.imag();
        }
      }
    }
  };
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::optional<CanonicalForm> best;
  for (int start = 0; start < 24; ++start) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = ang(rng);
    auto res = minimize_least_squares(f, 24, x);
    const auto& y = res.x;
    CanonicalForm cf;
    double phi = y[0], chi = y[5], nu = std::cos(y[1]), s_mu = std::sin(y[1]);
    if (nu < 0) {
      nu = -nu;
      s_mu = -s_mu;
      chi += kPi;
    }
    phi = wrap_phase(phi);
    if (phi > kPi / 2) {
      phi -= kPi;
      chi += kPi;
    } else if (phi < -kPi / 2) {
      phi += kPi;
      chi += kPi;
    }
    cf.theta = phi;
    cf.nu = nu;
    cf.mu = std::abs(s_mu);
    cf.s = sign_of(s_mu);
    cf.phase = wrap_phase(chi);
    cf.u = normalize_basis(su2_from_angles(y[2], y[3], y[4]));
    cf.residual = coefficient_distance(
        raw, canonical_coefficients(cf.theta, 0.0, cf.nu, cf.s * cf.mu, cf.u, std::polar(1.0, cf.phase)));
    if (!best || cf.residual < best->residual) best = cf;
    if (best->residual < 1e-12) break;
  }
  return best;
}

inline FamilyMatch family_match(const CanonicalForm& cf, double tol) {
  FamilyMatch m;
  auto& prm = m.params;
  prm.p = std::pow(std::cos(cf.theta), 2);
  prm.q = std::pow(std::cos(cf.theta_prime), 2);
  prm.mu = cf.mu;
  prm.s1 = -sign_of(std::sin(cf.theta));
  prm.s2 = prm.s1 * sign_of(std::sin(cf.theta_prime));
  prm.s3 = cf.s * prm.s2;
  prm.phase = cf.phase;
  if (cf.mu <= tol) {
    m.kase = DihedralCase::kMuZero;
    prm.mu = 0.0;
    prm.s3 = 1;
  } else if (std::abs(prm.alpha()) <= tol) {
    m.kase = DihedralCase::kZeZero;
  } else if (prm.beta() <= tol) {
    m.kase = DihedralCase::kZdZero;
  } else {
    m.kase = DihedralCase::kGeneric;
  }
  prm.kase = m.kase;
  try {
    DihedralParams check = prm;
    if (m.kase == DihedralCase::kZeZero) check.q = check.p;
    if (m.kase == DihedralCase::kZdZero) check.q = 1.0 - check.p;
    check.validate(tol);
    m.open_ranges = true;
  } catch (const Error&) {
    m.open_ranges = false;
  }
  return m;
}

}  // namespace detail

/// Finds (theta, theta', nu, mu, s, U, chi) with A_k = e^{i chi} U e^{i theta sx}
/// A^D_k e^{i theta' sx} U^dagger. A basis U = I is preferred when it fits;
/// otherwise theta' is set to 0 (only theta + theta' is basis independent).
/// Throws kNotInClass when no fit reaches `tol`.
inline CanonicalForm extract_canonical_form(const QuantumWalk& walk, double tol = 1e-9) {
  auto raw = detail::spinor_coefficients(walk);
  auto mw = to_momentum(walk);
  std::optional<CanonicalForm> best;
  auto consider = [&](std::optional<CanonicalForm> cf) {
    if (cf && (!best || cf->residual < best->residual)) best = cf;
  };
  if (auto g = su2_gauge(mw, 1e-8)) {
    for (cplx sign : {cplx{1.0}, cplx{-1.0}}) {
      const cplx gauge = sign * *g;
      auto b = detail::scaled(raw, 1.0 / gauge);
      for (auto cf : {detail::canonical_identity_basis(b), detail::canonical_general_basis(b)}) {
        if (!cf) continue;
        const bool in_range = std::abs(cf->theta) <= kPi / 2 + 1e-12 && std::abs(cf->theta_prime) <= kPi / 2 + 1e-12;
        if (!in_range) continue;
        cf->phase = std::arg(gauge);
        if (cf->identity_basis && cf->residual <= tol) {
          cf->closed_form = detail::family_match(*cf, 1e-9);
          return *cf;
        }
        consider(cf);
      }
    }
  }
  if (best && best->residual <= tol) return *best;
  consider(detail::canonical_least_squares(raw));
  if (!best || best->residual > tol) {
    throw Error(ErrorCode::kNotInClass, "no canonical form within tolerance (best residual " +
                                            std::to_string(best ? best->residual : INFINITY) + ")");
  }
  return *best;
}

struct ParityCertificate {
  Mat2 p = Mat2::Zero();
  double residual = INFINITY;
  /// Smallest singular value of the sampled linear system.
  double min_singular_value = INFINITY;
  bool found = false;
};

/// Looks for a Hermitian unitary P != +-I with P A_k P^dagger = A_{-k} at
/// `samples` wave numbers.
inline ParityCertificate parity_test(const QuantumWalk& walk, int samples = 64, double threshold = 1e-8) {
  auto mw = to_momentum(walk);
  if (mw.coin_dim() != 2 || mw.dim() != 1) throw Error(ErrorCode::kDimensionMismatch, "spinorial walk on Z expected");
  const std::array<Mat2, 4> basis{pauli::id(), pauli::x(), pauli::y(), pauli::z()};
  const auto ks = brillouin_grid(samples);
  Eigen::MatrixXd sys(8 * samples, 4);
  std::vector<std::pair<Mat2, Mat2>> at;
  for (int i = 0; i < samples; ++i) {
    const double k = ks[static_cast<std::size_t>(i)] + 0.5 * kPi / samples;
    Mat2 ak = mw.at(k), amk = mw.at(-k);
    at.emplace_back(ak, amk);
    for (int c = 0; c < 4; ++c) {
      Mat2 e = basis[static_cast<std::size_t>(c)] * ak - amk * basis[static_cast<std::size_t>(c)];
      for (int r = 0; r < 4; ++r) {
        sys(8 * i + 2 * r, c) = e(r / 2, r % 2).real();
        sys(8 * i + 2 * r + 1, c) = e(r / 2, r % 2).imag();
      }
    }
  }
  sys /= std::sqrt(static_cast<double>(samples));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  ParityCertificate cert;
  cert.min_singular_value = sv(3);
  std::vector<Eigen::Vector4d> null;
  for (int i = 0; i < 4; ++i) {
    if (sv(i) <= threshold) null.push_back(svd.matrixV().col(i));
  }
  if (null.empty()) return cert;
  // Traceless element of the nullspace.
  Eigen::Vector4d c;
  if (null.size() == 1) {
    c = null[0];
    if (std::abs(c(0)) > threshold) return cert;
  } else {
    Eigen::MatrixXd n(4, static_cast<Eigen::Index>(null.size()));
    for (std::size_t i = 0; i < null.size(); ++i) n.col(static_cast<Eigen::Index>(i)) = null[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> row(n.row(0), Eigen::ComputeFullV);
    c = n * row.matrixV().col(n.cols() - 1);
  }
  c(0) = 0.0;
  c.normalize();
  for (int i = 1; i < 4; ++i) {
    if (std::abs(c(i)) > 1e-12) {
      if (c(i) < 0) c = -c;
      break;
    }
  }
  Mat2 p = Mat2::Zero();
  for (int i = 1; i < 4; ++i) p += c(i) * basis[static_cast<std::size_t>(i)];
  double res = 0.0;
  for (const auto& [ak, amk] : at) res = std::max(res, (p * ak * p - amk).norm());
  cert.p = p;
  cert.residual = res;
  cert.found = res <= threshold;
  return cert;
}

/// omega(k) = arccos(delta cos k + gamma) for A_k = g B_k, B_k in SU(2).
struct DispersionParams {
  double delta = 0.0;
  double gamma = 0.0;
  /// Global phase g with delta >= 0.
  cplx gauge{1.0, 0.0};

  double omega(double k) const { return clamped_acos(delta * std::cos(k) + gamma); }
};

/// delta = tr C_{+1} / g and gamma = tr C_0 / (2 g). The sign of g is chosen
/// so that delta >= 0. Throws kNotInClass when these are not real or do not
/// reproduce the spectrum.
inline DispersionParams dispersion_params(const QuantumWalk& walk, double tol = 1e-9) {
  auto c = detail::spinor_coefficients(walk);
  auto mw = to_momentum(walk);
  auto g = su2_gauge(mw, 1e-8);
  if (!g) throw Error(ErrorCode::kNotInClass, "determinant of A_k is not constant");
  cplx d = c.plus.trace() / *g;
  cplx dm = c.minus.trace() / *g;
  cplx gm = 0.5 * c.zero.trace() / *g;
  if (std::abs(d.imag()) > tol || std::abs(gm.imag()) > tol || std::abs(d - dm) > tol) {
    throw Error(ErrorCode::kNotInClass, "traces are not real and symmetric in k");
  }
  DispersionParams out{d.real(), gm.real(), *g};
  if (out.delta < 0 || (out.delta == 0 && out.gamma < 0)) {
    out.delta = -out.delta;
    out.gamma = -out.gamma;
    out.gauge = -out.gauge;
  }
  if (std::abs(out.delta + out.gamma) > 1.0 + tol || std::abs(out.delta - out.gamma) > 1.0 + tol) {
    throw Error(ErrorCode::kNotInClass, "|delta +- gamma| exceeds 1");
  }
  for (double k : brillouin_grid(16)) {
    Mat2 b = mw.at(k + 0.05) / out.gauge;
    if (std::abs(su2_angle(b) - out.omega(k + 0.05)) > 1e3 * tol) {
      throw Error(ErrorCode::kNotInClass, "spectrum does not follow arccos(delta cos k + gamma)");
    }
  }
  return out;
}

/// U e^{i phi sx} A^D_k U^dagger times e^{i chi} as a walk on Z.
inline QuantumWalk make_parity_class_walk(double phi, double nu, int s, const Mat2& u = Mat2::Identity(), double chi = 0.0) {
  if (nu < 0.0 || nu > 1.0) throw Error(ErrorCode::kConstraint, "nu must lie in [0, 1]");
  if (s != 1 && s != -1) throw Error(ErrorCode::kConstraint, "s must be +1 or -1");
  if ((u * u.adjoint() - Mat2::Identity()).norm() > 1e-12) throw Error(ErrorCode::kConstraint, "U must be unitary");
  const double mu = std::sqrt(std::max(0.0, 1.0 - nu * nu));
  auto c = detail::canonical_coefficients(phi, 0.0, nu, s * mu, u, std::polar(1.0, chi));
  return QuantumWalk(detail::line_graph(true), 2, {CMatrix(c.plus), CMatrix(c.minus), CMatrix(c.zero)});
}

/// Walk e^{i phi sx} A^D_k (s = +1) whose spectrum is arccos(delta cos k + gamma).
inline QuantumWalk make_parity_walk(double delta, double gamma) {
  if (std::abs(delta + gamma) > 1.0 + 1e-12 || std::abs(delta - gamma) > 1.0 + 1e-12) {
    throw Error(ErrorCode::kConstraint, "|delta +- gamma| must not exceed 1");
  }
  // nu^2 and cos^2 phi are the roots of x^2 - (1 + delta^2 - gamma^2) x + delta^2.
  const double b = 1.0 + delta * delta - gamma * gamma;
  const double disc = std::max(0.0, b * b - 4.0 * delta * delta);
  const double nu = std::sqrt(std::min(1.0, 0.5 * (b + std::sqrt(disc))));
  const double mu = std::sqrt(std::max(0.0, 1.0 - nu * nu));
  const double c = nu > 0.0 ? delta / nu : 0.0;
  const double s = mu > 0.0 ? -gamma / mu : 0.0;
  const double phi = std::atan2(s, c);
  return make_parity_class_walk(phi, nu, 1);
}

/// Haar-random 2 x 2 unitary.
inline Mat2 random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat2 z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Mat2> qr(z);
  Mat2 q = qr.householderQ();
  Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 2; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

}  // namespace qw
