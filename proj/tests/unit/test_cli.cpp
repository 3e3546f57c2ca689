// Copyright 2026 The countgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "countgof_cli/cli.hpp"

namespace countgof {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"countgof"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("countgof_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
  std::string simulate(std::size_t T, int seed) {
    const auto r = run_cli({"simulate", "--preset", "arx1-cos", "--T", std::to_string(T), "--seed",
                            std::to_string(seed), "--out", path("s.csv")});
    EXPECT_EQ(r.code, 0) << r.err;
    return path("s.csv");
  }

  fs::path dir_;
};

const std::string kFixtures = COUNTGOF_FIXTURE_DIR;
const std::string kConfigs = COUNTGOF_CONFIG_DIR;

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::size_t n = 0;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

TEST_F(Cli, SimulateWritesCsvAndManifest) {
  const std::string a = slurp(simulate(100, 4));
  EXPECT_EQ(data_rows(a), 100u);
  EXPECT_NE(a.find("\nt,y,x1,lambda\n"), std::string::npos);
  EXPECT_EQ(a.rfind("# countgof ", 0), 0u);
  EXPECT_NE(a.find("# seed: 4\n"), std::string::npos);
  const std::string side = slurp(path("s.csv.manifest.json"));
  EXPECT_NE(side.find("wall_clock_seconds"), std::string::npos);
  EXPECT_NE(side.find("\"subcommand\": \"simulate\""), std::string::npos);
  EXPECT_EQ(slurp(simulate(100, 4)), a);
  EXPECT_NE(slurp(simulate(100, 5)), a);
}

TEST_F(Cli, SimulateFromConfig) {
  const auto r = run_cli({"simulate", "--config", kConfigs + "/simulate_s1.json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data_rows(r.out), 200u);
}

TEST_F(Cli, InfeasibleParametersAreUsageErrors) {
  const std::string cfg = write("bad.json", R"({"dgp": {"preset": "arx1-cos", "theta":
      {"omega": 0.2, "alpha": [1.2], "exog": [0.5]}}, "T": 50})");
  const auto r = run_cli({"simulate", "--config", cfg});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("sum(alpha) + sum(beta) < 1"), std::string::npos) << r.err;
  const std::string typo = write("typo.json", R"({"dgp": {"preset": "arx1-cos"}, "TT": 50})");
  const auto t = run_cli({"simulate", "--config", typo});
  EXPECT_EQ(t.code, 2);
  EXPECT_NE(t.err.find("unknown key 'TT'"), std::string::npos) << t.err;
}

TEST_F(Cli, TestPrintsPValueAndDecision) {
  const std::string data = simulate(120, 6);
  const auto r = run_cli({"test", "--data", data, "--preset", "arx1-cos", "--B", "49", "--workers", "1",
                          "--out", path("t.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("p-value = "), std::string::npos);
  EXPECT_NE(r.out.find("decision at alpha = 0.05"), std::string::npos);
  EXPECT_NE(r.out.find("47th order statistic of 49"), std::string::npos);
  EXPECT_NE(slurp(path("t.csv")).find("statistic,value,p_value,B,dropped,reject\n"), std::string::npos);
}

TEST_F(Cli, TestUsesOrderStatisticRule) {
  const std::string data = simulate(80, 7);
  const auto r = run_cli({"test", "--data", data, "--preset", "arx1-cos", "--B", "499", "--alpha",
                          "0.05", "--workers", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("475th order statistic of 499"), std::string::npos) << r.out;
}

TEST_F(Cli, UsageErrors) {
  const std::string data = simulate(50, 8);
  EXPECT_EQ(run_cli({"test", "--data", data, "--preset", "arx1-cos", "--eta", "2.5"}).code, 2);
  EXPECT_EQ(run_cli({"test", "--data", data, "--preset", "arx1-cos", "--variant", "Delta7"}).code, 2);
  EXPECT_EQ(run_cli({"test", "--data", data, "--preset", "arx1-cos", "--block-length", "x"}).code, 2);
  EXPECT_EQ(run_cli({"test", "--data", data}).code, 2);
  EXPECT_EQ(run_cli({"fit", "--data", path("missing.csv"), "--preset", "arx1-cos"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(Cli, FitWritesReport) {
  const std::string data = simulate(300, 9);
  const auto r = run_cli({"fit", "--data", data, "--preset", "garchx11-cos", "--out", path("f.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("beta1="), std::string::npos);
  const std::string rep = slurp(path("f.json"));
  EXPECT_NE(rep.find("\"aic\""), std::string::npos);
  EXPECT_EQ(rep.find("wall_clock"), std::string::npos);
}

TEST_F(Cli, McOutputIndependentOfWorkers) {
  const std::string cfg = write("mc.json", R"({"dgp": {"preset": "arx1-cos"}, "T": [60], "M": 6,
      "B": 9, "tunings": [{"gamma": 1, "eta": 1}], "variants": ["DeltaTW", "Delta1"], "seed": 3})");
  ASSERT_EQ(run_cli({"mc", "--config", cfg, "--workers", "1", "--out", path("w1"), "--p-values"}).code, 0);
  ASSERT_EQ(run_cli({"mc", "--config", cfg, "--workers", "3", "--out", path("w3"), "--p-values"}).code, 0);
  EXPECT_EQ(slurp(path("w1.csv")), slurp(path("w3.csv")));
  EXPECT_EQ(slurp(path("w1.txt")), slurp(path("w3.txt")));
  EXPECT_EQ(slurp(path("w1.pvalues.csv")), slurp(path("w3.pvalues.csv")));
  EXPECT_EQ(data_rows(slurp(path("w1.pvalues.csv"))), 12u);
  EXPECT_NE(slurp(path("w3.manifest.json")).find("\"workers\": 3"), std::string::npos);
}

TEST_F(Cli, AnalyzeRanksModelsAndTests) {
  const auto r = run_cli({"analyze", "--data", kFixtures + "/daily_counts.csv", "--recipe",
                          kConfigs + "/daily_recipe.json", "--candidates",
                          kConfigs + "/daily_candidates.json", "--gof", "--B", "19", "--out",
                          path("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("goodness of fit for"), std::string::npos);
  EXPECT_NE(r.out.find("l=10"), std::string::npos);
  EXPECT_EQ(data_rows(slurp(path("a.models.csv"))), 3u);
  EXPECT_EQ(data_rows(slurp(path("a.gof.csv"))), 4u);
  const auto plain = run_cli({"analyze", "--data", kFixtures + "/daily_counts.csv", "--recipe",
                              kConfigs + "/daily_recipe.json", "--candidates",
                              kConfigs + "/daily_candidates.json"});
  EXPECT_EQ(plain.code, 0);
  EXPECT_EQ(plain.out.find("goodness of fit"), std::string::npos);
}

TEST_F(Cli, AnalyzeMissingColumnNamesLine) {
  const std::string data = write("d.csv", "date,count,AT\n2019-01-01,1,2.0\n");
  const auto r = run_cli({"analyze", "--data", data, "--recipe", kConfigs + "/daily_recipe.json",
                          "--candidates", kConfigs + "/daily_candidates.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("d.csv:1: missing column 'P'"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace countgof
