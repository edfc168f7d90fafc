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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qwalk/presentation.hpp"
#include "qwalk/walk.hpp"

namespace qw {

/// On-disk walk description: presentation text, coin dimension and one
/// row-major matrix of [re, im] pairs per generator label.
struct WalkSpec {
  std::string name;
  QuantumWalk walk;
  nlohmann::json params = nlohmann::json::object();
};

inline nlohmann::json to_json(const WalkSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["presentation"] = format_presentation(spec.walk.graph());
  j["coin_dim"] = spec.walk.coin_dim();
  j["transitions"] = nlohmann::json::array();
  const auto& gens = spec.walk.graph().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& m = spec.walk.transitions()[i];
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
    j["transitions"].push_back({{"label", gens[i].label}, {"matrix", entries}});
  }
  j["params"] = spec.params;
  return j;
}

inline std::string serialize_walk_spec(const WalkSpec& spec) { return to_json(spec).dump(2) + "\n"; }

inline WalkSpec walk_spec_from_json(const nlohmann::json& j) {
  try {
    WalkSpec spec;
    spec.name = j.value("name", std::string{});
    auto graph = parse_presentation(j.at("presentation").get<std::string>());
    const int s = j.at("coin_dim").get<int>();
    if (s < 1) throw Error(ErrorCode::kParse, "coin_dim must be positive");
    std::vector<CMatrix> mats(graph.size());
    std::vector<bool> seen(graph.size(), false);
    for (const auto& t : j.at("transitions")) {
      const auto label = t.at("label").get<std::string>();
      auto idx = graph.index_of(label);
      if (!idx) throw Error(ErrorCode::kParse, "transition for unknown generator '" + label + "'");
      if (seen[*idx]) throw Error(ErrorCode::kParse, "duplicate transition for '" + label + "'");
      const auto& entries = t.at("matrix");
      if (entries.size() != static_cast<std::size_t>(s * s)) {
        throw Error(ErrorCode::kParse, "matrix for '" + label + "' needs " + std::to_string(s * s) + " entries");
      }
      CMatrix m(s, s);
      for (int k = 0; k < s * s; ++k) {
        const auto& e = entries.at(static_cast<std::size_t>(k));
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParse, "matrix entries are [re, im] pairs");
        m(k / s, k % s) = cplx(e[0].get<double>(), e[1].get<double>());
      }
      mats[*idx] = m;
      seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) throw Error(ErrorCode::kParse, "no transition for '" + graph.generators()[i].label + "'");
    }
    spec.walk = QuantumWalk(std::move(graph), s, std::move(mats));
    if (j.contains("params")) spec.params = j["params"];
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("walk spec: ") + e.what());
  }
}

inline WalkSpec parse_walk_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("walk spec is not valid JSON: ") + e.what());
  }
  return walk_spec_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline WalkSpec load_walk_spec(const std::string& path) { return parse_walk_spec(read_text_file(path)); }

inline void save_walk_spec(const WalkSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << serialize_walk_spec(spec);
}

}  // namespace qw
