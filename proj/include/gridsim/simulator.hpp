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

#ifndef GRIDSIM_SIMULATOR_HPP_
#define GRIDSIM_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridsim/circuit.hpp"
#include "gridsim/noise.hpp"
#include "gridsim/rng.hpp"

namespace gridsim {

// kSample draws the auxiliary outcome; kAverage keeps the outcome-averaged
// (non-selective) state and only reports P(1).
enum class MeasureMode { kSample, kAverage };

struct RunRecord {
  std::vector<int> outcomes;  // -1 for averaged measurements
  std::vector<double> p_one;
  std::vector<std::string> labels;
  std::vector<std::string> warnings;
};

// A circuit lowered to local matrices (trajectories) or full matrices
// (density matrices), with noise channels attached to every step. Immutable
// after construction; safe to share across threads.
class CompiledCircuit {
 public:
  enum class Target { kTrajectory, kDensity };

  CompiledCircuit(const Circuit& circuit, const std::optional<NoiseModel>& noise,
                  Target target = Target::kTrajectory);

  const SpaceLayout& layout() const { return layout_; }
  Target target() const { return target_; }

  RunRecord run(QuantumState& psi, CounterRng& rng, SbsTrace* trace = nullptr) const;
  RunRecord run(DensityMatrix& rho, MeasureMode mode, CounterRng* rng = nullptr,
                SbsTrace* trace = nullptr) const;

 private:
  struct LocalOp {
    int subsystem;
    int aux_value;
    CMat m;
  };
  enum class Type { kUnitary, kJump, kMeasure };
  struct Op {
    Type type = Type::kUnitary;
    std::vector<LocalOp> local;
    CMat full;
    std::string label;
    int round = -1;
    std::string annotation;
    std::vector<int> channels;  // indices into channels_
  };

  void record_measure(const Op& op, int outcome, double p1, RunRecord& rec, SbsTrace* trace,
                      std::string& pending) const;

  SpaceLayout layout_;
  Target target_;
  std::vector<Op> ops_;
  std::vector<KrausSet> channels_;
  std::vector<std::vector<CMat>> channels_full_;
};

// Convenience wrappers that compile and run once.
RunRecord run_circuit(const Circuit& circuit, QuantumState& state,
                      const std::optional<NoiseModel>& noise, std::uint64_t seed,
                      SbsTrace* trace = nullptr);
RunRecord run_circuit(const Circuit& circuit, DensityMatrix& rho,
                      const std::optional<NoiseModel>& noise, MeasureMode mode,
                      std::uint64_t seed, SbsTrace* trace = nullptr);

}  // namespace gridsim

#endif  // GRIDSIM_SIMULATOR_HPP_
