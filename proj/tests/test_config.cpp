// Copyright 2026 The gridsim Authors
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
#include <fstream>
#include <sstream>
#include <string>

#include "gridsim/config.hpp"
#include "gridsim/error.hpp"
#include "gridsim/runner.hpp"

namespace gridsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string config_error(const json& raw) {
  try {
    validate_config(raw);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gridsim_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Config, SeedIsRequired) {
  EXPECT_NE(config_error(json::object()).find("seed"), std::string::npos);
  EXPECT_EQ(config_error({{"seed", 1}}), "");
}

TEST(Config, RangeAndInvariantErrors) {
  const std::string d = config_error({{"seed", 1}, {"code", {{"delta", 1.5}}}});
  EXPECT_NE(d.find("code.delta"), std::string::npos);
  EXPECT_NE(d.find("out of range"), std::string::npos);
  const std::string t =
      config_error({{"seed", 1}, {"noise", {{"aux_T1", 10e-6}, {"aux_T2", 30e-6}}}});
  EXPECT_NE(t.find("aux_T2"), std::string::npos);
  EXPECT_NE(t.find("invariant violated"), std::string::npos);
  EXPECT_EQ(config_error({{"seed", 1}, {"noise", {{"aux_T1", 10e-6}, {"aux_T2", 20e-6}}}}), "");
}

TEST(Config, UnknownKeysAndTypesNamePath) {
  const std::string u = config_error({{"seed", 1}, {"isthmus", {{"fractoin", 0.5}}}});
  EXPECT_NE(u.find("isthmus.fractoin"), std::string::npos);
  EXPECT_NE(u.find("unknown key"), std::string::npos);
  const std::string t = config_error({{"seed", 1}, {"stabilize", {{"rounds", "many"}}}});
  EXPECT_NE(t.find("stabilize.rounds"), std::string::npos);
  EXPECT_NE(config_error({{"seed", 1}, {"experiment", "sweep"}, {"sweep", {{"path", "code.nope"}}}})
                .find("sweep.path"),
            std::string::npos);
}

TEST(Config, ResolvedIsFixedPoint) {
  const RunConfig a = validate_config({{"seed", 5}, {"code", {{"name", "tesseract"}}}});
  const RunConfig b = validate_config(a.resolved);
  EXPECT_EQ(a.resolved, b.resolved);
  EXPECT_EQ(a.code().stabilizers.size(), 4u);
  EXPECT_EQ(a.seed, 5u);
}

TEST(Config, Overrides) {
  json doc = json::object();
  apply_override(doc, "seed=3");
  apply_override(doc, "code.delta=0.25");
  apply_override(doc, "code.name=tesseract");
  apply_override(doc, "sweep.values=[1,2]");
  EXPECT_EQ(doc["seed"], 3);
  EXPECT_DOUBLE_EQ(doc["code"]["delta"].get<double>(), 0.25);
  EXPECT_EQ(doc["code"]["name"], "tesseract");
  EXPECT_EQ(doc["sweep"]["values"].size(), 2u);
  EXPECT_THROW(apply_override(doc, "novalue"), ConfigError);
  EXPECT_DOUBLE_EQ(json_at_path(doc, "code.delta").get<double>(), 0.25);
}

TEST(Runner, LifetimeWithoutLossReportsInfiniteGain) {
  json raw = {{"seed", 1},
              {"experiment", "lifetime"},
              {"lifetime", {{"qec", false}, {"rounds", 12}}},
              {"noise", {{"kappa", 0.0}}}};
  const json doc = run_experiment(validate_config(raw));
  EXPECT_EQ(doc["result"]["gain"], "inf");
  EXPECT_EQ(doc["result"]["t_ref"], "inf");
}

TEST(Runner, SweepProducesPerValueRunsAndCombinedTable) {
  json raw = {{"seed", 2},
              {"experiment", "sweep"},
              {"charfunc", {{"points", 3}, {"extent", 1.0}}},
              {"sweep", {{"experiment", "charfunc"}, {"path", "code.delta"},
                         {"values", {0.25, 0.3, 0.35}}}}};
  const json doc = run_experiment(validate_config(raw));
  ASSERT_EQ(doc["runs"].size(), 3u);
  EXPECT_EQ(doc["series"]["sweep"]["rows"].size(), 3u);
  const fs::path dir = scratch("sweep");
  emit_outputs(doc, dir.string());
  EXPECT_TRUE(fs::exists(dir / "result.json"));
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  for (const auto& r : doc["runs"]) {
    EXPECT_TRUE(fs::exists(dir / r["tag"].get<std::string>() / "result.json"));
  }
  fs::remove_all(dir);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GRIDSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli_codes");
  EXPECT_EQ(run_cli("charfunc --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("charfunc --seed 1 --set code.delta=1.5 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("charfunc --seed 1 --set code.deltaa=0.3 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("nonsense"), 2);
  EXPECT_EQ(run_cli("charfunc --seed 1 --set charfunc.points=3 --out " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "result.json"));
  fs::remove_all(dir);
}

TEST(Cli, RerunIsByteIdentical) {
  const fs::path dir = scratch("cli_rerun");
  const std::string args = "charfunc --seed 4 --set charfunc.points=5 --out " + dir.string();
  ASSERT_EQ(run_cli(args), 0);
  const std::string first = slurp(dir / "result.json");
  ASSERT_EQ(run_cli(args), 0);
  EXPECT_EQ(slurp(dir / "result.json"), first);
  EXPECT_FALSE(first.empty());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace gridsim
