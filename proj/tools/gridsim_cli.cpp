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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridsim/config.hpp"
#include "gridsim/error.hpp"
#include "gridsim/runner.hpp"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Flags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw gridsim::ConfigError("--config", "cannot read " + path);
  nlohmann::json j = nlohmann::json::parse(is, nullptr, false);
  if (j.is_discarded()) throw gridsim::ConfigError("--config", "invalid JSON in " + path);
  return j;
}

int run(const std::string& kind, const Flags& f) {
  nlohmann::json raw = f.config_path.empty() ? nlohmann::json::object()
                                             : read_json_file(f.config_path);
  for (const auto& o : f.overrides) gridsim::apply_override(raw, o);
  raw["experiment"] = kind;
  if (f.seed) raw["seed"] = *f.seed;
  if (!f.out.empty()) raw["out"] = f.out;
  const gridsim::RunConfig cfg = gridsim::validate_config(raw);
  const nlohmann::json doc = gridsim::run_experiment(cfg);
  gridsim::emit_outputs(doc, cfg.out);
  std::cout << "wrote " << (std::filesystem::path(cfg.out) / "result.json").string() << "\n";
  return 0;
}

int replot(const Flags& f) {
  const std::string dir = f.out.empty() ? "out" : f.out;
  const auto path = (std::filesystem::path(dir) / "result.json").string();
  std::ifstream is(path);
  if (!is) throw gridsim::ConfigError("--out", "no result.json in " + dir);
  const nlohmann::json doc = nlohmann::json::parse(is, nullptr, false);
  if (doc.is_discarded()) throw gridsim::ConfigError("--out", "invalid JSON in " + path);
  gridsim::emit_derived(doc, dir);
  std::cout << "replotted " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridsim: grid-code simulator batch front-end"};
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"prepare", "optimize an ECD encoding circuit for a logical state"},
      {"stabilize", "outcome-averaged sBs stabilization"},
      {"lifetime", "logical lifetime and gain over 1/kappa"},
      {"isthmus", "auxiliary-decay injection, baseline vs injected ensembles"},
      {"lossprobe", "single photon-loss signature and post-selection"},
      {"charfunc", "characteristic-function scan with SVG heatmap"},
      {"sweep", "repeat an experiment over values of one config path"}};
  for (const auto& [name, help] : kinds) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--set", flags.overrides, "override, key.path=value (repeatable)");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--out", flags.out, "output directory");
  }
  CLI::App* rp = app.add_subcommand("replot", "regenerate CSV/SVG from an existing result.json");
  rp->add_option("--out", flags.out, "directory holding result.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (rp->parsed()) return replot(flags);
    for (const auto& [name, help] : kinds) {
      if (app.got_subcommand(name)) return run(name, flags);
    }
  } catch (const gridsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const gridsim::Error& e) {
    std::cerr << gridsim::to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
