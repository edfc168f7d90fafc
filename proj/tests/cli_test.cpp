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

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "qw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = qw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(QW_SAMPLES_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    setenv("QW_OUTPUT_DIR", dir_.c_str(), 1);
  }
  void TearDown() override {
    unsetenv("QW_OUTPUT_DIR");
    fs::remove_all(dir_);
  }
  std::string read(const std::string& name) { return qw::read_text_file((dir_ / name).string()); }
  fs::path dir_;
};

TEST_F(CliTest, CheckExitCodes) {
  EXPECT_EQ(run({"check", sample("dirac.json")}).code, 0);
  auto broken = run({"check", sample("broken.json")});
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.out.find("not unitary"), std::string::npos);
  EXPECT_EQ(run({"check", sample("missing.json")}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
}

TEST_F(CliTest, WeylDispersionIsLinear) {
  auto r = run({"dispersion", sample("weyl.json"), "--samples", "8", "--out", "weyl.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(read("weyl.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "k,omega_plus,omega_minus,v_group,diff_coeff");
  int rows = 0;
  while (std::getline(csv, line)) {
    double k, wp, wm;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &k, &wp, &wm), 3);
    EXPECT_NEAR(wp, std::abs(k), 1e-12) << line;
    EXPECT_NEAR(wm, -std::abs(k), 1e-12) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 8);
}

TEST_F(CliTest, EvolveIsDeterministicAndNormalised) {
  std::vector<std::string> args{"evolve", sample("dirac.json"), "--steps", "5", "--init", "0,1", "--out", "a.csv"};
  ASSERT_EQ(run(args).code, 0);
  args.back() = "b.csv";
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
  std::istringstream csv(read("a.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "site,component,prob");
  double total = 0;
  while (std::getline(csv, line)) total += std::stod(line.substr(line.rfind(',') + 1));
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(run({"evolve", sample("dirac.json"), "--init", "0,7"}).code, 2);
}

TEST_F(CliTest, DihedralPipeline) {
  ASSERT_EQ(run({"dihedral", "make", "--case", "generic", "--p", "0.8", "--q", "0.2", "--mu", "0.5", "--out",
                 "dihedral.json"}).code,
            0);
  EXPECT_EQ(run({"dihedral", "make", "--case", "ze0", "--p", "0.8", "--q", "0.2", "--mu", "0.5"}).code, 1);
  const auto walk = (dir_ / "dihedral.json").string();
  EXPECT_EQ(run({"check", walk}).code, 0);
  ASSERT_EQ(run({"coarse-grain", walk, "--out", "cg.json"}).code, 0);
  const auto cg = (dir_ / "cg.json").string();
  auto par = run({"parity", cg});
  EXPECT_EQ(par.code, 0);
  auto can = run({"canonical", cg});
  EXPECT_EQ(can.code, 0);
  EXPECT_NE(can.out.find("generic"), std::string::npos) << can.out;
  EXPECT_EQ(run({"canonical", sample("hadamard.json")}).code, 1);
  EXPECT_EQ(run({"parity", sample("hadamard.json")}).code, 1);
  EXPECT_EQ(run({"dihedral", "make", "--n", "5", "--out", "d5.json"}).code, 0);
  EXPECT_EQ(run({"check", (dir_ / "d5.json").string()}).code, 0);
}

TEST_F(CliTest, EnumerateAndSolve) {
  auto en = run({"dihedral", "enumerate", "--max-n", "2"});
  ASSERT_EQ(en.code, 0);
  EXPECT_NE(en.out.find("a=(1,0), a_inv=(-1,0), b=(1,1), c=(-1,1), d=(0,1), e=(0,0)\n"), std::string::npos) << en.out;
  EXPECT_NE(en.out.find("8 admissible graph(s)"), std::string::npos) << en.out;
  EXPECT_EQ(run({"dihedral", "enumerate", "--max-n", "9"}).code, 2);
  auto sq = run({"solve", sample("square.txt"), "--starts", "8", "--out", "sq.csv"});
  EXPECT_EQ(sq.code, 0) << sq.err;
  EXPECT_FALSE(read("sq.csv").empty());
  EXPECT_EQ(run({"classify", sample("dirac.json")}).code, 1);
}

TEST_F(CliTest, PlotScript) {
  ASSERT_EQ(run({"dispersion", sample("dirac.json"), "--samples", "16", "--out", "d.csv"}).code, 0);
  ASSERT_EQ(run({"plot-script", (dir_ / "d.csv").string(), "--out", "plot.py"}).code, 0);
  EXPECT_NE(read("plot.py").find("d.csv"), std::string::npos);
}

}  // namespace
