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

#include <string>
#include <vector>

#include "qwalk/groups.hpp"

// Text format:
//   family=dihedral_inf; gens: a=(1,0), a_inv=(-1,0), b=(1,1), c=(-1,1), d=(0,1)
// with an optional "; rels: a a_inv, b^2, ..." section. Family tags are
// free_abelian(d), abelian(i1,...,in;d), dihedral_inf and dihedral(n).
// A generator is either a normal-form payload in parentheses or a word over
// the family alphabet (see parse_word).

namespace qw {

namespace detail {

/// Splits on `sep` at parenthesis depth zero.
inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::int64_t> parse_int_list(const std::string& body) {
  std::vector<std::int64_t> out;
  for (auto& item : split_top_level(body, ',')) {
    auto t = trim(item);
    if (t.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &pos);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "not an integer: '" + t + "'");
    }
    if (pos != t.size()) throw Error(ErrorCode::kParse, "not an integer: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline GroupFamily parse_family(const std::string& text) {
  std::string t = detail::trim(text);
  if (t == "dihedral_inf") return GroupFamily::infinite_dihedral();
  auto open = t.find('(');
  if (open == std::string::npos || t.back() != ')') throw Error(ErrorCode::kParse, "unknown family '" + t + "'");
  std::string name = t.substr(0, open);
  std::string body = t.substr(open + 1, t.size() - open - 2);
  if (name == "free_abelian") {
    auto v = detail::parse_int_list(body);
    if (v.size() != 1) throw Error(ErrorCode::kParse, "free_abelian takes one argument");
    return GroupFamily::free_abelian(static_cast<int>(v[0]));
  }
  if (name == "dihedral") {
    auto v = detail::parse_int_list(body);
    if (v.size() != 1) throw Error(ErrorCode::kParse, "dihedral takes one argument");
    return GroupFamily::finite_dihedral(v[0]);
  }
  if (name == "abelian") {
    auto parts = detail::split_top_level(body, ';');
    if (parts.size() != 2) throw Error(ErrorCode::kParse, "abelian(i1,...,in;d) expected");
    auto d = detail::parse_int_list(parts[1]);
    if (d.size() != 1) throw Error(ErrorCode::kParse, "abelian(...;d) needs one free rank");
    return GroupFamily::abelian(detail::parse_int_list(parts[0]), static_cast<int>(d[0]));
  }
  throw Error(ErrorCode::kParse, "unknown family '" + t + "'");
}

struct Presentation {
  GroupFamily family;
  std::vector<Generator> generators;
  std::vector<std::string> relators;
};

inline Presentation parse_presentation_text(const std::string& text) {
  Presentation p;
  bool have_family = false;
  bool have_gens = false;
  for (auto& raw : detail::split_top_level(text, ';')) {
    std::string sec = detail::trim(raw);
    if (sec.empty()) continue;
    if (sec.rfind("family", 0) == 0) {
      auto eq = sec.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::kParse, "family section needs '='");
      p.family = parse_family(sec.substr(eq + 1));
      have_family = true;
    } else if (sec.rfind("gens", 0) == 0) {
      if (!have_family) throw Error(ErrorCode::kParse, "family must precede gens");
      auto colon = sec.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::kParse, "gens section needs ':'");
      for (auto& item : detail::split_top_level(sec.substr(colon + 1), ',')) {
        auto it = detail::trim(item);
        if (it.empty()) continue;
        auto eq = it.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::kParse, "generator '" + it + "' needs '='");
        std::string label = detail::trim(it.substr(0, eq));
        std::string value = detail::trim(it.substr(eq + 1));
        if (!value.empty() && value.front() == '(') {
          if (value.back() != ')') throw Error(ErrorCode::kParse, "unbalanced payload for " + label);
          auto payload = detail::parse_int_list(value.substr(1, value.size() - 2));
          p.generators.push_back({label, GroupElement::from_payload(p.family, payload)});
        } else {
          p.generators.push_back({label, parse_word(p.family, value)});
        }
      }
      have_gens = true;
    } else if (sec.rfind("rels", 0) == 0) {
      auto colon = sec.find(':');
      if (colon == std::string::npos) throw Error(ErrorCode::kParse, "rels section needs ':'");
      for (auto& item : detail::split_top_level(sec.substr(colon + 1), ',')) {
        auto r = detail::trim(item);
        if (!r.empty()) p.relators.push_back(r);
      }
    } else {
      throw Error(ErrorCode::kParse, "unknown section '" + sec + "'");
    }
  }
  if (!have_family || !have_gens) throw Error(ErrorCode::kParse, "presentation needs family and gens");
  return p;
}

inline CayleyGraph parse_presentation(const std::string& text, bool require_generation = true) {
  auto p = parse_presentation_text(text);
  return CayleyGraph::build(p.family, std::move(p.generators), std::move(p.relators), require_generation);
}

inline std::string format_presentation(const CayleyGraph& graph) {
  std::string s = "family=" + graph.family().tag() + "; gens: ";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (i) s += ", ";
    s += graph.generators()[i].label + "=" + graph.generators()[i].element.to_string();
  }
  if (!graph.relators().empty()) {
    s += "; rels: ";
    for (std::size_t i = 0; i < graph.relators().size(); ++i) {
      if (i) s += ", ";
      s += graph.relators()[i];
    }
  }
  return s;
}

}  // namespace qw
