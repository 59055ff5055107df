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

#include "gridsim/config.hpp"

#include <algorithm>

#include "gridsim/error.hpp"

namespace gridsim {

namespace {

using json = nlohmann::json;

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (const auto& p : parts) {
    if (p.empty()) throw ConfigError(path, "malformed dotted path");
  }
  return parts;
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const char* type_name(const json& v) {
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  if (v.is_object()) return "object";
  return "null";
}

// Recursive merge of `in` over `base`; unknown keys and type changes are errors.
void merge(json& base, const json& in, const std::string& prefix) {
  if (!in.is_object()) throw ConfigError(prefix, "expected an object");
  for (auto it = in.begin(); it != in.end(); ++it) {
    const std::string path = join(prefix, it.key());
    if (!base.contains(it.key())) throw ConfigError(path, "unknown key");
    json& slot = base[it.key()];
    const json& v = it.value();
    if (slot.is_object()) {
      merge(slot, v, path);
      continue;
    }
    const bool ok = slot.is_null()                 ? true
                    : slot.is_boolean()            ? v.is_boolean()
                    : slot.is_number_integer()     ? v.is_number_integer()
                    : slot.is_number()             ? v.is_number()
                    : slot.is_string()             ? v.is_string()
                    : slot.is_array()              ? v.is_array()
                                                   : false;
    if (!ok) {
      throw ConfigError(path, std::string("expected ") + type_name(slot) + ", got " + type_name(v));
    }
    slot = v;
  }
}

double positive(const json& doc, const std::string& path) {
  const json& v = json_at_path(doc, path);
  if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(path, "must be > 0");
  return v.get<double>();
}

void non_negative(const json& doc, const std::string& path) {
  const json& v = json_at_path(doc, path);
  if (!(v.get<double>() >= 0.0)) throw ConfigError(path, "must be >= 0");
}

void at_least(const json& doc, const std::string& path, long long lo) {
  const json& v = json_at_path(doc, path);
  if (v.get<long long>() < lo) {
    throw ConfigError(path, "must be >= " + std::to_string(lo));
  }
}

void one_of(const json& doc, const std::string& path, const std::vector<std::string>& allowed) {
  const std::string v = json_at_path(doc, path).get<std::string>();
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(path, "must be one of {" + list + "}, got \"" + v + "\"");
  }
}

void logical_state(const json& doc, const std::string& path) {
  one_of(doc, path, {"0", "1", "plus", "minus", "i", "-i"});
}

void check_values(const json& d) {
  one_of(d, "experiment", experiment_kinds());
  if (!d.contains("seed") || d["seed"].is_null()) {
    throw ConfigError("seed", "required (no default seed is provided)");
  }
  if (!d["seed"].is_number_unsigned() && !(d["seed"].is_number_integer() && d["seed"] >= 0)) {
    throw ConfigError("seed", "must be a non-negative integer");
  }
  one_of(d, "code.name", {"gkp", "tesseract"});
  const double delta = d["code"]["delta"].get<double>();
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("code.delta", "out of range: must lie in (0, 1)");
  }
  const json& dims = d["layout"]["dims"];
  const size_t modes = d["code"]["name"] == "gkp" ? 1 : 2;
  if (!dims.empty() && dims.size() != modes) {
    throw ConfigError("layout.dims", "needs " + std::to_string(modes) + " entries for this code");
  }
  for (size_t i = 0; i < dims.size(); ++i) {
    if (!dims[i].is_number_integer() || dims[i].get<int>() < 2) {
      throw ConfigError("layout.dims." + std::to_string(i), "must be an integer >= 2");
    }
  }
  non_negative(d, "noise.kappa");
  non_negative(d, "noise.kappa_phi");
  std::optional<double> t1, t2;
  for (const char* key : {"aux_T1", "aux_T2"}) {
    const json& v = d["noise"][key];
    if (v.is_null()) continue;
    const double t = positive(d, std::string("noise.") + key);
    (std::string(key) == "aux_T1" ? t1 : t2) = t;
  }
  if (t2 && !t1) throw ConfigError("noise.aux_T2", "requires aux_T1");
  if (t1 && t2 && *t2 > 2.0 * *t1) {
    throw ConfigError("noise.aux_T2", "invariant violated: aux_T2 <= 2 * aux_T1");
  }
  for (const char* key : {"rotation", "displacement", "ecd", "measure_reset"}) {
    positive(d, std::string("noise.gate_durations.") + key);
  }
  at_least(d, "schedule.repeat", 1);

  logical_state(d, "prepare.state");
  at_least(d, "prepare.depth", 1);
  if (d["prepare"]["depth"].get<int>() > 10) throw ConfigError("prepare.depth", "must be <= 10");
  const double ft = d["prepare"]["target_fidelity"].get<double>();
  if (!(ft > 0.0 && ft <= 1.0)) throw ConfigError("prepare.target_fidelity", "must lie in (0, 1]");
  at_least(d, "prepare.max_evaluations", 1);
  at_least(d, "prepare.restarts", 1);

  at_least(d, "stabilize.rounds", 1);
  const json& start = d["stabilize"]["start"];
  if (!start.is_null()) {
    if (!start.is_string()) throw ConfigError("stabilize.start", "expected string or null");
    logical_state(d, "stabilize.start");
  }

  one_of(d, "lifetime.pauli", {"X", "Z"});
  at_least(d, "lifetime.rounds", 3);
  at_least(d, "lifetime.fit_skip", 0);

  at_least(d, "isthmus.injection_round", 0);
  at_least(d, "isthmus.window", 1);
  at_least(d, "isthmus.shots", 1);
  const double f = d["isthmus"]["fraction"].get<double>();
  if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("isthmus.fraction", "must lie in [0, 1]");

  at_least(d, "lossprobe.loss_round", 0);
  at_least(d, "lossprobe.window", 1);
  at_least(d, "lossprobe.recovery_rounds", 0);
  at_least(d, "lossprobe.shots", 1);
  logical_state(d, "lossprobe.initial");

  one_of(d, "charfunc.source", {"codeword", "vacuum", "stabilize"});
  logical_state(d, "charfunc.state");
  positive(d, "charfunc.extent");
  at_least(d, "charfunc.points", 1);
  at_least(d, "charfunc.rounds", 1);

  const std::string sx = d["sweep"]["experiment"].get<std::string>();
  one_of(d, "sweep.experiment", experiment_kinds());
  if (sx == "sweep") throw ConfigError("sweep.experiment", "cannot nest sweeps");
  if (d["experiment"] == "sweep") {
    const std::string path = d["sweep"]["path"].get<std::string>();
    json probe = default_config();
    try {
      json_at_path(probe, path);
    } catch (const ConfigError&) {
      throw ConfigError("sweep.path", "does not resolve: \"" + path + "\"");
    }
    if (d["sweep"]["values"].empty()) throw ConfigError("sweep.values", "must not be empty");
  }
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k = {"prepare",   "stabilize", "lifetime", "isthmus",
                                             "lossprobe", "charfunc",  "sweep"};
  return k;
}

json default_config() {
  const NoiseModel n;
  return {
      {"experiment", "stabilize"},
      {"seed", nullptr},
      {"out", "out"},
      {"code", {{"name", "gkp"}, {"delta", 0.3}}},
      {"layout", {{"dims", json::array()}}},
      {"noise", n.to_json()},
      {"schedule", {{"repeat", 2}}},
      {"prepare",
       {{"state", "0"}, {"depth", 8}, {"target_fidelity", 0.95}, {"max_evaluations", 40000},
        {"restarts", 6}}},
      {"stabilize", {{"rounds", 200}, {"start", nullptr}}},
      {"lifetime", {{"pauli", "Z"}, {"qec", true}, {"rounds", 1000}, {"fit_skip", 5}}},
      {"isthmus", {{"injection_round", 8}, {"fraction", 0.5}, {"window", 10}, {"shots", 5000}}},
      {"lossprobe",
       {{"loss_round", 0}, {"window", 4}, {"recovery_rounds", 8}, {"shots", 2000},
        {"initial", "0"}, {"inject", true}}},
      {"charfunc",
       {{"source", "codeword"}, {"state", "0"}, {"extent", 4.0}, {"points", 41}, {"rounds", 200}}},
      {"sweep", {{"experiment", "charfunc"}, {"path", "code.delta"}, {"values", json::array()}}},
  };
}

const json& json_at_path(const json& doc, const std::string& path) {
  const json* cur = &doc;
  for (const auto& part : split_path(path)) {
    if (!cur->is_object() || !cur->contains(part)) throw ConfigError(path, "unknown key");
    cur = &(*cur)[part];
  }
  return *cur;
}

void set_json_path(json& doc, const std::string& path, const json& value) {
  json* cur = &doc;
  for (const auto& part : split_path(path)) {
    if (cur->is_null()) *cur = json::object();
    if (!cur->is_object()) throw ConfigError(path, "parent is not an object");
    cur = &(*cur)[part];
  }
  *cur = value;
}

void apply_override(json& doc, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  set_json_path(doc, path, value);
}

RunConfig validate_config(const json& raw) {
  json d = default_config();
  merge(d, raw, "");
  check_values(d);
  RunConfig c;
  c.experiment = d["experiment"].get<std::string>();
  c.seed = d["seed"].get<std::uint64_t>();
  c.out = d["out"].get<std::string>();
  c.resolved = d;
  return c;
}

CodeSpec RunConfig::code() const {
  const double delta = resolved["code"]["delta"].get<double>();
  return resolved["code"]["name"] == "gkp" ? gkp_square(delta) : tesseract(delta);
}

std::vector<int> RunConfig::mode_dims() const {
  return resolved["layout"]["dims"].get<std::vector<int>>();
}

NoiseModel RunConfig::noise() const { return NoiseModel::from_json(resolved["noise"]); }

int RunConfig::repeat() const { return resolved["schedule"]["repeat"].get<int>(); }

const json& RunConfig::section(const std::string& name) const { return resolved.at(name); }

}  // namespace gridsim
