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

#ifndef GRIDSIM_ENCODE_HPP_
#define GRIDSIM_ENCODE_HPP_

#include <cstdint>
#include <vector>

#include "gridsim/circuit.hpp"
#include "gridsim/codes.hpp"

namespace gridsim {

struct EncodeOptions {
  double target_fidelity = 0.95;
  int max_evaluations = 40000;  // total over all restarts
  int restarts = 6;
  std::uint64_t seed = 1;
  double beta_scale = 1.5;  // spread of the random initial ECD amplitudes
  GateDurations durations;
};

struct EncodeResult {
  Circuit circuit;
  double fidelity = 0.0;  // |<target, g|psi>|
  bool reached_target = false;
  int evaluations = 0;
  std::vector<double> parameters;
};

// Layer j: R(theta_j, phi_j) then ECD(beta_j); a final rotation returns the
// auxiliary to |g>. Parameters are found by Nelder-Mead simplex with restarts.
EncodeResult encode_logical(const CodeWords& target, LogicalState which, int depth,
                            const SpaceLayout& layout, const EncodeOptions& opts = {});

// Builds the circuit for a parameter vector of the ansatz above.
Circuit encoding_circuit(const std::vector<double>& params, int depth, const SpaceLayout& layout,
                         const GateDurations& durations = {});

}  // namespace gridsim

#endif  // GRIDSIM_ENCODE_HPP_
