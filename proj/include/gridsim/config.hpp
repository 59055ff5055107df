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

#ifndef GRIDSIM_CONFIG_HPP_
#define GRIDSIM_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridsim/codes.hpp"
#include "gridsim/noise.hpp"
#include "json.hpp"

namespace gridsim {

// Experiment kinds accepted by the batch front-end.
const std::vector<std::string>& experiment_kinds();

// Default document; every accepted key appears here.
nlohmann::json default_config();

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string out;
  nlohmann::json resolved;  // defaults merged and validated

  CodeSpec code() const;
  std::vector<int> mode_dims() const;  // empty means per-code default
  NoiseModel noise() const;
  int repeat() const;
  const nlohmann::json& section(const std::string& name) const;
};

// Merges raw JSON over the defaults, rejecting unknown keys and bad values.
RunConfig validate_config(const nlohmann::json& raw);

// Applies "a.b.c=value" overrides; the value is parsed as JSON, else kept as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

// Dotted-path access into a JSON document.
const nlohmann::json& json_at_path(const nlohmann::json& doc, const std::string& path);
void set_json_path(nlohmann::json& doc, const std::string& path, const nlohmann::json& value);

}  // namespace gridsim

#endif  // GRIDSIM_CONFIG_HPP_
