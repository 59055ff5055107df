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

#include "gridsim/runner.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>

#include "gridsim/encode.hpp"
#include "gridsim/error.hpp"
#include "gridsim/experiments.hpp"
#include "gridsim/io.hpp"

namespace gridsim {

namespace {

using json = nlohmann::json;

json table(std::vector<std::string> columns) {
  return {{"columns", std::move(columns)}, {"rows", json::array()}};
}

std::optional<NoiseModel> optional_noise(const RunConfig& c) {
  const NoiseModel n = c.noise();
  if (n.is_noiseless()) return std::nullopt;
  return n;
}

json run_prepare(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("prepare");
  const SpaceLayout layout = SpaceLayout::with_aux(dims);
  const CodeWords cw = construct_codewords(code, layout.oscillator_part());
  EncodeOptions o;
  o.target_fidelity = s["target_fidelity"].get<double>();
  o.max_evaluations = s["max_evaluations"].get<int>();
  o.restarts = s["restarts"].get<int>();
  o.seed = c.seed;
  o.durations = c.noise().durations;
  const LogicalState which = parse_logical_state(s["state"].get<std::string>());
  const EncodeResult r = encode_logical(cw, which, s["depth"].get<int>(), layout, o);
  return {{"result",
           {{"fidelity", r.fidelity},
            {"reached_target", r.reached_target},
            {"evaluations", r.evaluations},
            {"parameters", r.parameters},
            {"circuit", r.circuit.to_json()}}},
          {"series", json::object()}};
}

json run_stabilize(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("stabilize");
  StabilizeOptions o;
  o.rounds = s["rounds"].get<int>();
  o.repeat = c.repeat();
  o.mode_dims = dims;
  if (!s["start"].is_null()) o.start = parse_logical_state(s["start"].get<std::string>());
  o.noise = optional_noise(c);
  const StabilizeResult r = stabilize(code, o);
  std::vector<std::string> cols = {"round"};
  for (const auto& l : r.labels) cols.push_back(l);
  cols.push_back("p_one");
  cols.push_back("mean_photons");
  json t = table(cols);
  for (size_t k = 0; k < r.p_one.size(); ++k) {
    json row = {k};
    for (double e : r.expectation[k]) row.push_back(e);
    row.push_back(r.p_one[k]);
    row.push_back(r.mean_photons[k]);
    t["rows"].push_back(row);
  }
  json res = {{"rounds", o.rounds},
              {"final_expectation", r.expectation.back()},
              {"final_mean_photons", r.mean_photons.back()}};
  if (r.final_trace_distance >= 0) res["final_trace_distance"] = r.final_trace_distance;
  return {{"result", res}, {"series", {{"stabilize", t}}}};
}

json run_lifetime(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("lifetime");
  LifetimeOptions o;
  o.pauli = s["pauli"] == "X" ? Pauli::kX : Pauli::kZ;
  o.rounds = s["rounds"].get<int>();
  o.qec = s["qec"].get<bool>();
  o.fit_skip = s["fit_skip"].get<int>();
  o.mode_dims = dims;
  o.repeat = c.repeat();
  const LifetimeResult r = logical_lifetime(code, c.noise(), o);
  json t = table({"round", "time", "expectation"});
  for (size_t k = 0; k < r.series.size(); ++k) t["rows"].push_back({k, r.times[k], r.series[k]});
  return {{"result", r.to_json()}, {"series", {{"lifetime", t}}}};
}

json signature_table(const SignatureResult& base, const SignatureResult& inj) {
  json t = table({"round", "one_frequency_baseline", "one_frequency_injected"});
  for (size_t k = 0; k < base.one_frequency.size(); ++k) {
    t["rows"].push_back({k, base.one_frequency[k],
                         k < inj.one_frequency.size() ? inj.one_frequency[k] : 0.0});
  }
  return t;
}

json run_isthmus(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("isthmus");
  IsthmusOptions o;
  o.injection_round = s["injection_round"].get<int>();
  o.fraction = s["fraction"].get<double>();
  o.window = s["window"].get<int>();
  o.shots = s["shots"].get<int>();
  o.seed = c.seed;
  o.mode_dims = dims;
  o.repeat = c.repeat();
  const IsthmusResult r = isthmus_experiment(code, o);
  return {{"result", r.to_json()}, {"series", {{"isthmus", signature_table(r.baseline, r.injected)}}}};
}

json run_lossprobe(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("lossprobe");
  LossProbeOptions o;
  o.loss_round = s["loss_round"].get<int>();
  o.window = s["window"].get<int>();
  o.recovery_rounds = s["recovery_rounds"].get<int>();
  o.shots = s["shots"].get<int>();
  o.seed = c.seed;
  o.mode_dims = dims;
  o.initial = parse_logical_state(s["initial"].get<std::string>());
  o.background = optional_noise(c);
  o.inject = s["inject"].get<bool>();
  o.repeat = c.repeat();
  const LossProbeResult r = photon_loss_signature(code, o);
  json res = r.to_json();
  // The pooled ensemble mixes runs with and without the loss, so post-selection
  // can separate them; the injected-only figures are reported alongside.
  std::vector<TrajectoryRecord> pooled = r.baseline_records;
  pooled.insert(pooled.end(), r.injected_records.begin(), r.injected_records.end());
  PostSelectionStrategy erasure;
  erasure.kind = PostSelectionStrategy::Kind::kErasureLimit;
  PostSelectionStrategy windowed;
  windowed.kind = PostSelectionStrategy::Kind::kWindowThreshold;
  windowed.window = 4;
  windowed.threshold = 2;
  res["post_selection"] = {post_selection_analysis(pooled, erasure).to_json(),
                           post_selection_analysis(pooled, windowed).to_json()};
  if (o.inject) {
    res["post_selection_injected_only"] = {
        post_selection_analysis(r.injected_records, erasure).to_json(),
        post_selection_analysis(r.injected_records, windowed).to_json()};
  }
  return {{"result", res},
          {"series", {{"lossprobe", signature_table(r.baseline, r.injected)}}},
          {"records",
           {{"baseline", records_to_json(r.baseline_records)},
            {"injected", records_to_json(r.injected_records)}}}};
}

json run_charfunc(const RunConfig& c, const CodeSpec& code, const std::vector<int>& dims) {
  const json& s = c.section("charfunc");
  const std::string source = s["source"].get<std::string>();
  const SpaceLayout osc(dims, false);
  const std::vector<cplx> grid = square_grid(s["extent"].get<double>(), s["points"].get<int>());
  DensityMatrix rho;
  if (source == "stabilize") {
    StabilizeOptions o;
    o.rounds = s["rounds"].get<int>();
    o.repeat = c.repeat();
    o.mode_dims = dims;
    o.noise = optional_noise(c);
    rho = stabilize(code, o).final_state;
  } else if (source == "vacuum") {
    rho = DensityMatrix::from_state(
        QuantumState::basis(osc, std::vector<int>(osc.subsystem_count(), 0)));
  } else {
    const CodeWords cw = construct_codewords(code, osc);
    rho = DensityMatrix::from_state(cw.logical(parse_logical_state(s["state"].get<std::string>())));
  }
  if (osc.subsystem_count() > 1) rho = partial_trace(rho, {0});
  const CharScan scan = characteristic_function_scan(rho, grid);
  json t = table({"re_beta", "im_beta", "re_c", "im_c", "abs_c", "truncation_flag"});
  int flagged = 0;
  for (size_t k = 0; k < grid.size(); ++k) {
    const cplx v = scan.values[k];
    t["rows"].push_back({grid[k].real(), grid[k].imag(), v.real(), v.imag(), std::abs(v),
                         scan.truncation_flag[k] ? 1 : 0});
    flagged += scan.truncation_flag[k];
  }
  json res = {{"source", source},
              {"points", s["points"]},
              {"extent", s["extent"]},
              {"flagged_points", flagged},
              {"c_origin_abs", std::abs(characteristic_function_scan(rho, {0.0}).values[0])}};
  json plot = {{"kind", "heatmap"},
               {"series", "charfunc"},
               {"column", "re_c"},
               {"points", s["points"]},
               {"extent", s["extent"]},
               {"grid_spacing", code.l / (2 * std::sqrt(2.0))},
               {"title", "Re C(beta), " + code.name}};
  return {{"result", res}, {"series", {{"charfunc", t}}}, {"plot", plot}};
}

json run_single(const RunConfig& c) {
  const CodeSpec code = c.code();
  const std::vector<int> dims = resolve_mode_dims(code, c.mode_dims());
  json body;
  if (c.experiment == "prepare") body = run_prepare(c, code, dims);
  else if (c.experiment == "stabilize") body = run_stabilize(c, code, dims);
  else if (c.experiment == "lifetime") body = run_lifetime(c, code, dims);
  else if (c.experiment == "isthmus") body = run_isthmus(c, code, dims);
  else if (c.experiment == "lossprobe") body = run_lossprobe(c, code, dims);
  else if (c.experiment == "charfunc") body = run_charfunc(c, code, dims);
  else throw ConfigError("experiment", "unsupported kind " + c.experiment);
  json doc = {{"experiment", c.experiment}, {"seed", c.seed}, {"config", c.resolved}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

std::string value_tag(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
  }
  return s;
}

std::string cell(const json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

json run_experiment(const RunConfig& c) {
  if (c.experiment != "sweep") return run_single(c);
  const json& sw = c.section("sweep");
  const std::string path = sw["path"].get<std::string>();
  json runs = json::array();
  json combined;
  std::vector<std::string> scalar_keys;
  for (const json& value : sw["values"]) {
    json raw = c.resolved;
    raw["experiment"] = sw["experiment"];
    set_json_path(raw, path, value);
    const RunConfig sub = validate_config(raw);
    json doc = run_single(sub);
    if (scalar_keys.empty()) {
      for (auto it = doc["result"].begin(); it != doc["result"].end(); ++it) {
        if (it.value().is_primitive()) scalar_keys.push_back(it.key());
      }
      std::vector<std::string> cols = {path};
      cols.insert(cols.end(), scalar_keys.begin(), scalar_keys.end());
      combined = table(cols);
    }
    json row = {value};
    for (const auto& k : scalar_keys) row.push_back(doc["result"].value(k, json(nullptr)));
    combined["rows"].push_back(row);
    runs.push_back({{"value", value}, {"tag", value_tag(value)}, {"run", std::move(doc)}});
  }
  return {{"experiment", "sweep"},
          {"seed", c.seed},
          {"config", c.resolved},
          {"result", {{"path", path}, {"count", runs.size()}}},
          {"series", {{"sweep", combined}}},
          {"runs", runs}};
}

void emit_derived(const json& doc, const std::string& dir) {
  namespace fs = std::filesystem;
  if (doc.contains("series")) {
    for (auto it = doc["series"].begin(); it != doc["series"].end(); ++it) {
      CsvTable t;
      t.header = it.value()["columns"].get<std::vector<std::string>>();
      for (const auto& r : it.value()["rows"]) {
        std::vector<std::string> cells;
        for (const auto& v : r) cells.push_back(cell(v));
        t.add_row(std::move(cells));
      }
      write_file_atomic((fs::path(dir) / (it.key() + ".csv")).string(), t.str());
    }
  }
  if (doc.contains("plot") && doc["plot"]["kind"] == "heatmap") {
    const json& p = doc["plot"];
    const json& t = doc["series"][p["series"].get<std::string>()];
    const auto cols = t["columns"].get<std::vector<std::string>>();
    const size_t ci = std::find(cols.begin(), cols.end(), p["column"].get<std::string>()) - cols.begin();
    std::vector<double> values;
    for (const auto& r : t["rows"]) values.push_back(r[ci].get<double>());
    write_file_atomic((fs::path(dir) / (p["series"].get<std::string>() + ".svg")).string(),
                      svg_heatmap(values, p["points"].get<int>(), p["extent"].get<double>(),
                                  p["grid_spacing"].get<double>(), p["title"].get<std::string>()));
  }
  if (doc.contains("runs")) {
    for (const auto& r : doc["runs"]) {
      emit_derived(r["run"], (fs::path(dir) / r["tag"].get<std::string>()).string());
    }
  }
}

void emit_outputs(const json& doc, const std::string& dir) {
  namespace fs = std::filesystem;
  json main = doc;
  if (main.contains("records")) {
    write_json_atomic((fs::path(dir) / "records.json").string(), main["records"]);
    main.erase("records");
  }
  if (main.contains("runs")) {
    for (auto& r : main["runs"]) {
      const std::string sub = (fs::path(dir) / r["tag"].get<std::string>()).string();
      emit_outputs(r["run"], sub);
      r["run"].erase("records");
    }
  }
  write_json_atomic((fs::path(dir) / "result.json").string(), main);
  emit_derived(main, dir);
}

}  // namespace gridsim
