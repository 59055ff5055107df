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

#ifndef GRIDSIM_NOISE_HPP_
#define GRIDSIM_NOISE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "gridsim/circuit.hpp"
#include "gridsim/fock.hpp"
#include "gridsim/rng.hpp"
#include "json.hpp"

namespace gridsim {

// Rates in 1/s, times in s. An unset auxiliary time means no decay.
struct NoiseModel {
  double kappa = 0.0;
  double kappa_phi = 0.0;
  std::optional<double> aux_t1;
  std::optional<double> aux_t2;
  GateDurations durations;

  void validate() const;
  bool is_noiseless() const { return kappa == 0.0 && kappa_phi == 0.0 && !aux_t1 && !aux_t2; }
  nlohmann::json to_json() const;
  static NoiseModel from_json(const nlohmann::json& j);
};

// Kraus operators acting on one subsystem.
struct KrausSet {
  int subsystem = 0;
  std::vector<CMat> ops;
  std::string name;

  // max |sum K^dag K - I|.
  double completeness_defect() const;
  std::vector<OperatorMatrix> full(const SpaceLayout& layout) const;
};

KrausSet loss_channel(double kappa_t, const SpaceLayout& layout, int mode);
KrausSet dephasing_channel(double kappa_phi_t, const SpaceLayout& layout, int mode);
KrausSet aux_decay_channels(std::optional<double> t1, std::optional<double> t2, double t,
                            const SpaceLayout& layout);

// All channels of `noise` for an interval of length t, in a fixed order.
std::vector<KrausSet> interval_channels(const NoiseModel& noise, const SpaceLayout& layout,
                                        double t);

void apply_channel(DensityMatrix& rho, const KrausSet& k);
// Samples one branch by its Born weight and renormalizes; returns its index.
int apply_channel(QuantumState& psi, const KrausSet& k, CounterRng& rng);

struct ErrorInjection {
  enum class Kind { kAuxDecay, kDisplacement };
  int step_index = 0;
  double fraction = 0.5;
  Kind kind = Kind::kAuxDecay;
  std::vector<cplx> alpha;  // for kDisplacement
};

// Splits the targeted step at `fraction` and inserts the jump. An Ecd
// becomes CD(f b), jump, CD((1-f) b), aux flip.
Circuit inject_error(const Circuit& circuit, const ErrorInjection& injection);

}  // namespace gridsim

#endif  // GRIDSIM_NOISE_HPP_
