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

#ifndef GRIDSIM_RUNNER_HPP_
#define GRIDSIM_RUNNER_HPP_

#include <string>

#include "gridsim/config.hpp"
#include "json.hpp"

namespace gridsim {

// Runs the configured experiment. The returned document holds the resolved
// config, the seed, scalar results and per-round series; it is a pure function
// of the config.
nlohmann::json run_experiment(const RunConfig& config);

// Writes result.json plus the CSV series and plots derived from it into `dir`.
// Sweeps recurse into one sub-directory per value.
void emit_outputs(const nlohmann::json& doc, const std::string& dir);

// Regenerates CSV and SVG artifacts from an existing result.json.
void emit_derived(const nlohmann::json& doc, const std::string& dir);

}  // namespace gridsim

#endif  // GRIDSIM_RUNNER_HPP_
