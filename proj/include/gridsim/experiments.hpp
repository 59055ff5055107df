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

#ifndef GRIDSIM_EXPERIMENTS_HPP_
#define GRIDSIM_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridsim/circuit.hpp"
#include "gridsim/codes.hpp"
#include "gridsim/noise.hpp"
#include "gridsim/simulator.hpp"
#include "json.hpp"

namespace gridsim {

// Worker count: GRIDSIM_THREADS if set and positive, else all cores.
int worker_count();
// Runs fn(i) for i in [0, n) on worker_count() threads. Results must be
// written to per-index slots so aggregation order never depends on timing.
void parallel_for(int n, const std::function<void(int)>& fn);

// Explicit dims are checked against the code; empty means 80 for one mode, 50 per mode for two.
std::vector<int> resolve_mode_dims(const CodeSpec& code, const std::vector<int>& dims);

// Round r measures stabilizer order[(r / repeat) % order.size()].
std::vector<int> sbs_schedule(const CodeSpec& code, int rounds, int repeat = 2);

// Each sBs round leaves the lattice shifted by half the measured stabilizer.
// The frame counts these half-shifts (mod 2) and reports the resulting sign
// of any displacement operator.
class ShiftFrame {
 public:
  explicit ShiftFrame(const CodeSpec& code);
  void record(int stabilizer_index);
  int sign(const PhaseSpaceVector& v) const;
  // True when the pending shift commutes with every stabilizer.
  bool is_logical() const;
  // Logical Pauli equivalent of the pending shift: {x, z} exponents.
  std::pair<int, int> logical_pauli() const;
  const std::vector<int>& pending() const { return pending_; }

 private:
  const CodeSpec* code_;
  std::vector<int> pending_;
};

double trace_distance(const CMat& a, const CMat& b);

// ------------------------------------------------------------ characteristic function

struct CharScan {
  std::vector<cplx> grid;
  std::vector<cplx> values;
  // Set where D(beta) rho D(beta)^dag holds more than tail_threshold population
  // in the top 10% of Fock levels.
  std::vector<bool> truncation_flag;
};

std::vector<cplx> square_grid(double extent, int points_per_axis);
CharScan characteristic_function_scan(const DensityMatrix& rho, const std::vector<cplx>& grid,
                                      double tail_threshold = 1e-3);
CharScan characteristic_function_scan(const QuantumState& psi, const std::vector<cplx>& grid,
                                      double tail_threshold = 1e-3);

// ------------------------------------------------------------ stabilization

struct StabilizeOptions {
  int rounds = 200;
  int repeat = 2;
  std::vector<int> mode_dims;  // empty: per-code default
  std::optional<LogicalState> start;  // unset: vacuum
  std::optional<NoiseModel> noise;
};

struct StabilizeResult {
  std::vector<std::string> labels;               // stabilizer labels
  std::vector<std::vector<double>> expectation;  // [round][stabilizer], frame-corrected Re<S_D>
  std::vector<double> p_one;                     // per round
  std::vector<double> mean_photons;              // per round, summed over modes
  double final_trace_distance = -1.0;            // to the start state, when started from a codeword
  DensityMatrix final_state;                     // oscillator part
};

// Outcome-averaged density-matrix evolution under repeated sBs rounds.
StabilizeResult stabilize(const CodeSpec& code, const StabilizeOptions& opts);

// Trace distance between a codeword and its image under one outcome-averaged
// sBs round (frame-corrected: a logical half-shift relabels the reference).
double sbs_fixed_point_distance(const CodeSpec& code, const CodeWords& cw, LogicalState which,
                                int stabilizer_index, int rounds = 1, int repeat = 2);

// ------------------------------------------------------------ lifetime

struct LifetimeOptions {
  Pauli pauli = Pauli::kZ;
  int rounds = 1000;
  bool qec = true;  // false: idle control with the same round duration
  int fit_skip = 5;
  std::vector<int> mode_dims;  // empty: per-code default
  int repeat = 2;
};

struct LifetimeResult {
  std::string pauli;
  double t_round = 0.0;
  double t_l = 0.0;  // +inf sentinel when the series does not decay
  double t_l_stderr = 0.0;
  double t_ref = 0.0;  // 1/kappa
  double gain = 0.0;   // +inf sentinel
  bool qec = true;
  std::vector<double> times;
  std::vector<double> series;

  nlohmann::json to_json() const;
};

struct ExpFit {
  double amplitude = 0.0;
  double decay_time = 0.0;  // +inf when the fitted slope is >= 0
  double decay_time_stderr = 0.0;
};
// Least squares of log(y) vs t; throws FitFailureError on non-positive data.
ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y, int skip);

LifetimeResult logical_lifetime(const CodeSpec& code, const NoiseModel& noise,
                                const LifetimeOptions& opts);

// ------------------------------------------------------------ signatures

struct SignatureResult {
  std::string condition;
  std::vector<double> one_frequency;  // per round
  double flip_probability = 0.0;
  double flip_stderr = 0.0;
  double detection_statistic = 0.0;  // max z-score of the window elevation vs baseline
  double max_elevation = 0.0;        // max frequency difference over the window
  int shots = 0;

  nlohmann::json to_json() const;
};

struct TrajectoryRecord {
  SbsTrace trace;
  std::vector<int> outcomes;
  double fidelity = 1.0;  // ideal-decoder weight of the initial logical value
};

struct IsthmusOptions {
  int injection_round = 8;
  double fraction = 0.5;
  int window = 10;
  int shots = 5000;
  std::uint64_t seed = 1;
  std::vector<int> mode_dims;  // empty: 80 for one mode, 50 per mode for two
  int repeat = 2;
};

struct IsthmusResult {
  SignatureResult baseline;
  SignatureResult injected;
  std::string initial_state;
  int rounds = 0;
  nlohmann::json to_json() const;
};

// Auxiliary decay at `fraction` of the Big ECD of the injection round. The
// initial logical state is chosen so that the injected half-shift would flip it.
IsthmusResult isthmus_experiment(const CodeSpec& code, const IsthmusOptions& opts);

struct LossProbeOptions {
  int loss_round = 0;  // the loss is applied just before this round
  int window = 4;
  int recovery_rounds = 8;
  int shots = 2000;
  std::uint64_t seed = 1;
  std::vector<int> mode_dims;  // empty: per-code default
  LogicalState initial = LogicalState::kZero;
  std::optional<NoiseModel> background;  // optional continuous noise
  bool inject = true;
  int repeat = 2;
};

struct LossProbeResult {
  SignatureResult baseline;
  SignatureResult injected;
  double p_one_within_window_baseline = 0.0;
  double p_one_within_window_injected = 0.0;
  double fidelity_baseline = 0.0;
  double fidelity_injected = 0.0;
  std::vector<TrajectoryRecord> injected_records;
  std::vector<TrajectoryRecord> baseline_records;
  nlohmann::json to_json() const;
};

LossProbeResult photon_loss_signature(const CodeSpec& code, const LossProbeOptions& opts);

// ------------------------------------------------------------ post-selection

struct PostSelectionStrategy {
  enum class Kind { kErasureLimit, kWindowThreshold };
  Kind kind = Kind::kErasureLimit;
  int window = 1;     // w
  int threshold = 1;  // k
  int first_round = 0;
  int last_round = -1;  // inclusive; -1 means through the end of the trace
  std::string name() const;
};

struct PostSelectionReport {
  std::string strategy;
  double retained_fraction = 0.0;
  double conditional_fidelity = 0.0;
  double unconditional_fidelity = 0.0;
  bool degenerate = false;
  int retained = 0;
  int total = 0;
  nlohmann::json to_json() const;
};

PostSelectionReport post_selection_analysis(const std::vector<TrajectoryRecord>& records,
                                            const PostSelectionStrategy& strategy);

nlohmann::json records_to_json(const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> records_from_json(const nlohmann::json& j);

}  // namespace gridsim

#endif  // GRIDSIM_EXPERIMENTS_HPP_
