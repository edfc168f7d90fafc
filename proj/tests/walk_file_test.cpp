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

#include <filesystem>

#include "qwalk/dihedral.hpp"
#include "qwalk/walk_file.hpp"

namespace qw {
namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    parse_walk_spec(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorCode::kInvalidArgument;
}

TEST(WalkFile, RoundTripIsExact) {
  WalkSpec spec{"generic", make_dihedral_walk({DihedralCase::kGeneric, 0.3, 0.2, 0.5, 1, -1, 1, 0.4})};
  spec.params = {{"p", 0.8}};
  auto back = parse_walk_spec(serialize_walk_spec(spec));
  EXPECT_EQ(back.name, "generic");
  EXPECT_EQ(back.params["p"], 0.8);
  EXPECT_EQ(back.walk.scalars(), spec.walk.scalars());
  EXPECT_EQ(back.walk.graph().relators(), spec.walk.graph().relators());
  EXPECT_EQ(serialize_walk_spec(back), serialize_walk_spec(spec));
}

TEST(WalkFile, SamplesLoad) {
  for (const char* name : {"dirac.json", "weyl.json", "hadamard.json", "broken.json"}) {
    auto spec = load_walk_spec(std::string(QW_SAMPLES_DIR) + "/" + name);
    EXPECT_EQ(check_unitarity(spec.walk).passed, std::string(name) != "broken.json") << name;
  }
}

TEST(WalkFile, MalformedInput) {
  EXPECT_EQ(parse_code("{"), ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"coin_dim": 1, "transitions": []})"), ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"presentation": "family=free_abelian(1); gens: a=x1", "coin_dim": 1,
                          "transitions": [{"label": "b", "matrix": [[1, 0]]}]})"),
            ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"presentation": "family=free_abelian(1); gens: a=x1", "coin_dim": 1,
                          "transitions": []})"),
            ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"presentation": "family=free_abelian(1); gens: a=x1", "coin_dim": 2,
                          "transitions": [{"label": "a", "matrix": [[1, 0]]}]})"),
            ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"presentation": "family=free_abelian(1); gens: a=x1", "coin_dim": 1,
                          "transitions": [{"label": "a", "matrix": [1]}]})"),
            ErrorCode::kParse);
  EXPECT_EQ(parse_code(R"({"presentation": "family=free_abelian(1); gens: a=x1", "coin_dim": 1,
                          "transitions": [{"label": "a", "matrix": [["1", 0]]}]})"),
            ErrorCode::kParse);
}

TEST(WalkFile, MissingFile) {
  try {
    load_walk_spec("/nonexistent/walk.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(WalkFile, SaveAndLoad) {
  auto path = std::filesystem::temp_directory_path() / "qwalk_walk_file_test.json";
  save_walk_spec({"weyl", make_weyl()}, path.string());
  auto back = load_walk_spec(path.string());
  EXPECT_EQ(back.walk.transitions()[0], make_weyl().transitions()[0]);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace qw
