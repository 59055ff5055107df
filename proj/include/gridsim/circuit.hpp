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

#ifndef GRIDSIM_CIRCUIT_HPP_
#define GRIDSIM_CIRCUIT_HPP_

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gridsim/codes.hpp"
#include "gridsim/fock.hpp"
#include "json.hpp"

namespace gridsim {

// Seconds.
struct GateDurations {
  double rotation = 10e-9;
  double displacement = 10e-9;
  double ecd = 300e-9;
  double measure_reset = 400e-9;

  double sbs_round() const { return 4 * rotation + 3 * ecd + measure_reset; }
};

struct AuxRotation {
  double theta = 0.0;
  double phi = 0.0;
};
// D(b/2) (x) |e><g| + D(-b/2) (x) |g><e|, per mode.
struct Ecd {
  std::vector<cplx> beta;
};
struct Displacement {
  std::vector<cplx> alpha;
};
// D(b/2) (x) |g><g| + D(-b/2) (x) |e><e|; an Ecd without its auxiliary flip.
struct ConditionalDisplacement {
  std::vector<cplx> beta;
};
struct AuxFlip {};
enum class JumpKind { kAuxLower, kPhotonLoss };
// Normalized quantum jump: sigma_minus on the auxiliary or a on one mode.
struct Jump {
  JumpKind kind = JumpKind::kAuxLower;
  int mode = 0;
};
struct AuxMeasureReset {
  std::string label;
  int round = -1;
};
struct Wait {};

using StepKind = std::variant<AuxRotation, Ecd, Displacement, ConditionalDisplacement, AuxFlip,
                              Jump, AuxMeasureReset, Wait>;

struct GateStep {
  StepKind kind;
  double duration = 0.0;
  std::string annotation;
};

std::string step_name(const GateStep& s);

struct Circuit {
  SpaceLayout layout;
  std::vector<GateStep> steps;

  void append(const Circuit& other);
  // Non-negative durations and vector lengths matching the mode count.
  void validate() const;
  double duration() const;
  nlohmann::json to_json() const;
};

enum class Pauli { kX, kZ };
enum class FrameGate { kX, kZ, kH };

// Software frame: quarter-turn phase-space rotation per mode and the
// accumulated logical Pauli record.
struct PauliFrame {
  std::vector<int> rotation;  // quarter turns, 0..3
  int x = 0;
  int z = 0;

  static PauliFrame identity(int modes) { return PauliFrame{std::vector<int>(modes, 0), 0, 0}; }
  bool operator==(const PauliFrame& o) const {
    return rotation == o.rotation && x == o.x && z == o.z;
  }
};

PauliFrame gauge_update(const PauliFrame& frame, FrameGate gate);
// Rotates each mode's amplitude by (-i)^rotation, so one H maps Z onto X.
PhaseSpaceVector apply_frame(const PauliFrame& frame, const PhaseSpaceVector& v);
// Flips a readout outcome of `measured` when the frame holds the anticommuting Pauli.
int relabel_outcome(const PauliFrame& frame, Pauli measured, int raw);

struct TraceEntry {
  int round_index = 0;
  std::string stabilizer_label;
  int outcome = 0;
  std::string injected_error;
};

class SbsTrace {
 public:
  void append(TraceEntry e);
  const std::vector<TraceEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  std::string to_csv() const;
  nlohmann::json to_json() const;

 private:
  std::vector<TraceEntry> entries_;
};

// Single-qubit rotation exp(-i theta/2 (cos phi sx + sin phi sy)).
CMat aux_rotation_matrix(double theta, double phi);
OperatorMatrix aux_rotation(double theta, double phi, const SpaceLayout& layout);
OperatorMatrix ecd(const std::vector<cplx>& beta, const SpaceLayout& layout);

struct SbsOptions {
  GateDurations durations;
  // Calibrated auxiliary rotation phases.
  std::array<double, 4> phases = {M_PI / 2, M_PI, 0.0, 3 * M_PI / 2};
  int round = -1;
  std::optional<PauliFrame> frame;
};

// Small ECD amplitudes (D^2/2) cosh(D^2) i S and Big ECD cosh(D^2) S.
Circuit sbs_round(const CodeSpec& code, int stabilizer_index, const SpaceLayout& layout,
                  const SbsOptions& opts = {});

Circuit logical_readout(const CodeSpec& code, Pauli pauli, bool finite_energy,
                        const SpaceLayout& layout, const std::optional<PauliFrame>& frame = {},
                        const GateDurations& durations = {});

struct BeamSplitter {
  cplx g;
  double t = 0.0;
};
struct TwoModeSqueeze {
  cplx eta;
  double t = 0.0;
};
using GaussianKind = std::variant<BeamSplitter, TwoModeSqueeze>;

// exp(-i t H) on modes 0 and 1, H_BS = g a^dag b + g^* b^dag a,
// H_TMS = eta a b + eta^* a^dag b^dag.
OperatorMatrix gaussian_two_mode(const GaussianKind& kind, const SpaceLayout& layout);

// Step builders with durations taken from `d`.
GateStep rotation_step(double theta, double phi, const GateDurations& d = {});
GateStep ecd_step(std::vector<cplx> beta, const GateDurations& d = {});
GateStep measure_step(std::string label, int round, const GateDurations& d = {});
GateStep displacement_step(std::vector<cplx> alpha, const GateDurations& d = {});
GateStep wait_step(double duration);

}  // namespace gridsim

#endif  // GRIDSIM_CIRCUIT_HPP_
