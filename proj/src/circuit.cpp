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

#include "gridsim/circuit.hpp"

#include <cmath>
#include <sstream>

#include "gridsim/error.hpp"

namespace gridsim {

namespace {

nlohmann::json cvec_json(const std::vector<cplx>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

std::vector<cplx> scaled(const std::vector<cplx>& v, cplx c) {
  std::vector<cplx> out = v;
  for (auto& z : out) z *= c;
  return out;
}

}  // namespace

std::string step_name(const GateStep& s) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AuxRotation>) return "aux_rotation";
        if constexpr (std::is_same_v<T, Ecd>) return "ecd";
        if constexpr (std::is_same_v<T, Displacement>) return "displacement";
        if constexpr (std::is_same_v<T, ConditionalDisplacement>) return "conditional_displacement";
        if constexpr (std::is_same_v<T, AuxFlip>) return "aux_flip";
        if constexpr (std::is_same_v<T, Jump>) return "jump";
        if constexpr (std::is_same_v<T, AuxMeasureReset>) return "aux_measure_reset";
        if constexpr (std::is_same_v<T, Wait>) return "wait";
        return "unknown";
      },
      s.kind);
}

void Circuit::append(const Circuit& other) {
  if (other.layout != layout) throw Error(ErrorKind::kLayoutMismatch, "circuit layouts differ");
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
}

void Circuit::validate() const {
  const int modes = layout.mode_count();
  for (size_t i = 0; i < steps.size(); ++i) {
    const GateStep& s = steps[i];
    const std::string where = "step " + std::to_string(i) + " (" + step_name(s) + ")";
    if (!(s.duration >= 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, where + ": negative duration");
    }
    auto check_len = [&](const std::vector<cplx>& v) {
      if (static_cast<int>(v.size()) != modes) {
        throw Error(ErrorKind::kLayoutMismatch, where + ": vector length != mode count");
      }
    };
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Ecd> || std::is_same_v<T, ConditionalDisplacement>) {
            check_len(k.beta);
          } else if constexpr (std::is_same_v<T, Displacement>) {
            check_len(k.alpha);
          } else if constexpr (std::is_same_v<T, Jump>) {
            if (k.kind == JumpKind::kPhotonLoss && (k.mode < 0 || k.mode >= modes)) {
              throw Error(ErrorKind::kIndexOutOfRange, where + ": mode out of range");
            }
          }
          bool needs_aux = !std::is_same_v<T, Displacement> && !std::is_same_v<T, Wait>;
          if constexpr (std::is_same_v<T, Jump>) needs_aux = k.kind == JumpKind::kAuxLower;
          if (needs_aux && !layout.has_aux()) {
            throw Error(ErrorKind::kLayoutMismatch, where + ": needs an auxiliary");
          }
        },
        s.kind);
  }
}

double Circuit::duration() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.duration;
  return t;
}

nlohmann::json Circuit::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json j = {{"kind", step_name(s)}, {"duration", s.duration}};
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, AuxRotation>) {
            j["theta"] = k.theta;
            j["phi"] = k.phi;
          } else if constexpr (std::is_same_v<T, Ecd> ||
                               std::is_same_v<T, ConditionalDisplacement>) {
            j["beta"] = cvec_json(k.beta);
          } else if constexpr (std::is_same_v<T, Displacement>) {
            j["alpha"] = cvec_json(k.alpha);
          } else if constexpr (std::is_same_v<T, Jump>) {
            j["jump"] = k.kind == JumpKind::kAuxLower ? "aux_lower" : "photon_loss";
            j["mode"] = k.mode;
          } else if constexpr (std::is_same_v<T, AuxMeasureReset>) {
            j["label"] = k.label;
            j["round"] = k.round;
          }
        },
        s.kind);
    if (!s.annotation.empty()) j["annotation"] = s.annotation;
    steps_json.push_back(j);
  }
  return {{"layout", layout.dims()}, {"has_aux", layout.has_aux()}, {"steps", steps_json}};
}

// ---------------------------------------------------------------- frames

PauliFrame gauge_update(const PauliFrame& frame, FrameGate gate) {
  PauliFrame f = frame;
  switch (gate) {
    case FrameGate::kX: f.x ^= 1; break;
    case FrameGate::kZ: f.z ^= 1; break;
    case FrameGate::kH:
      for (auto& r : f.rotation) r = (r + 1) % 4;
      std::swap(f.x, f.z);
      break;
  }
  return f;
}

PhaseSpaceVector apply_frame(const PauliFrame& frame, const PhaseSpaceVector& v) {
  PhaseSpaceVector out = v;
  static const cplx kTurn[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
  for (int k = 0; k < v.size(); ++k) {
    const int r = k < static_cast<int>(frame.rotation.size()) ? frame.rotation[k] : 0;
    out.alpha[k] *= kTurn[((r % 4) + 4) % 4];
  }
  return out;
}

int relabel_outcome(const PauliFrame& frame, Pauli measured, int raw) {
  const int flip = measured == Pauli::kZ ? frame.x : frame.z;
  return raw ^ flip;
}

// ---------------------------------------------------------------- trace

void SbsTrace::append(TraceEntry e) {
  if (e.outcome != 0 && e.outcome != 1) {
    throw Error(ErrorKind::kInvalidArgument, "trace outcome must be 0 or 1");
  }
  if (!entries_.empty() && e.round_index <= entries_.back().round_index) {
    throw Error(ErrorKind::kInvalidArgument, "trace round indices must increase");
  }
  entries_.push_back(std::move(e));
}

std::string SbsTrace::to_csv() const {
  std::ostringstream os;
  os << "round,stabilizer_label,outcome,injected_error\n";
  for (const auto& e : entries_) {
    os << e.round_index << "," << e.stabilizer_label << "," << e.outcome << ","
       << e.injected_error << "\n";
  }
  return os.str();
}

nlohmann::json SbsTrace::to_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json j = {{"round", e.round_index}, {"stabilizer_label", e.stabilizer_label},
                        {"outcome", e.outcome}};
    if (!e.injected_error.empty()) j["injected_error"] = e.injected_error;
    a.push_back(j);
  }
  return a;
}

// ---------------------------------------------------------------- gates

CMat aux_rotation_matrix(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  CMat r(2, 2);
  r << c, cplx(0, -1) * s * std::polar(1.0, -phi), cplx(0, -1) * s * std::polar(1.0, phi), c;
  return r;
}

OperatorMatrix aux_rotation(double theta, double phi, const SpaceLayout& layout) {
  return embed(OperatorMatrix(SpaceLayout({2}), aux_rotation_matrix(theta, phi)),
               layout.aux_index(), layout);
}

OperatorMatrix ecd(const std::vector<cplx>& beta, const SpaceLayout& layout) {
  if (!layout.has_aux()) throw Error(ErrorKind::kLayoutMismatch, "ecd needs an auxiliary");
  if (static_cast<int>(beta.size()) != layout.mode_count()) {
    throw Error(ErrorKind::kLayoutMismatch, "ecd: beta length != mode count");
  }
  CMat m = CMat::Identity(layout.total_dim(), layout.total_dim());
  for (int k = 0; k < layout.mode_count(); ++k) {
    DisplacementKernel dk(layout.dim(k));
    apply_local_columns(m, layout, k, dk.matrix(beta[k] / 2.0), 0);
    apply_local_columns(m, layout, k, dk.matrix(-beta[k] / 2.0), 1);
  }
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  apply_local_columns(m, layout, layout.aux_index(), x);
  return OperatorMatrix(layout, m);
}

GateStep rotation_step(double theta, double phi, const GateDurations& d) {
  return GateStep{AuxRotation{theta, phi}, d.rotation, {}};
}
GateStep ecd_step(std::vector<cplx> beta, const GateDurations& d) {
  return GateStep{Ecd{std::move(beta)}, d.ecd, {}};
}
GateStep measure_step(std::string label, int round, const GateDurations& d) {
  return GateStep{AuxMeasureReset{std::move(label), round}, d.measure_reset, {}};
}
GateStep displacement_step(std::vector<cplx> alpha, const GateDurations& d) {
  return GateStep{Displacement{std::move(alpha)}, d.displacement, {}};
}
GateStep wait_step(double duration) { return GateStep{Wait{}, duration, {}}; }

Circuit sbs_round(const CodeSpec& code, int stabilizer_index, const SpaceLayout& layout,
                  const SbsOptions& opts) {
  if (stabilizer_index < 0 || stabilizer_index >= static_cast<int>(code.stabilizers.size())) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "invalid stabilizer index " + std::to_string(stabilizer_index));
  }
  if (!layout.has_aux() || layout.mode_count() != code.mode_count) {
    throw Error(ErrorKind::kLayoutMismatch, "sbs_round: layout does not match the code");
  }
  PhaseSpaceVector s = code.stabilizers[stabilizer_index];
  if (opts.frame) s = apply_frame(*opts.frame, s);
  const double d2 = code.delta * code.delta;
  const auto big = scaled(s.alpha, std::cosh(d2));
  const auto small = scaled(s.alpha, cplx(0, 0.5 * d2 * std::cosh(d2)));
  const GateDurations& d = opts.durations;
  Circuit c{layout, {}};
  c.steps = {rotation_step(M_PI / 2, opts.phases[0], d), ecd_step(small, d),
             rotation_step(M_PI / 2, opts.phases[1], d), ecd_step(big, d),
             rotation_step(M_PI / 2, opts.phases[2], d), ecd_step(small, d),
             rotation_step(M_PI / 2, opts.phases[3], d),
             measure_step(code.stabilizers[stabilizer_index].label, opts.round, d)};
  return c;
}

Circuit logical_readout(const CodeSpec& code, Pauli pauli, bool finite_energy,
                        const SpaceLayout& layout, const std::optional<PauliFrame>& frame,
                        const GateDurations& d) {
  if (!layout.has_aux() || layout.mode_count() != code.mode_count) {
    throw Error(ErrorKind::kLayoutMismatch, "logical_readout: layout does not match the code");
  }
  PhaseSpaceVector p = pauli == Pauli::kX ? code.logical_x : code.logical_z;
  if (frame) p = apply_frame(*frame, p);
  const std::string label = pauli == Pauli::kX ? "readout_X" : "readout_Z";
  Circuit c{layout, {}};
  if (!finite_energy) {
    c.steps = {rotation_step(M_PI / 2, 3 * M_PI / 2, d), ecd_step(p.alpha, d),
               rotation_step(M_PI / 2, M_PI / 2, d), measure_step(label, -1, d)};
    return c;
  }
  const double d2 = code.delta * code.delta;
  const auto big = scaled(p.alpha, std::cosh(d2));
  const auto small = scaled(p.alpha, cplx(0, -0.5 * d2 * std::cosh(d2)));
  c.steps = {rotation_step(M_PI / 2, 0.0, d),     ecd_step(small, d),
             rotation_step(M_PI / 2, M_PI / 2, d), ecd_step(big, d),
             rotation_step(M_PI / 2, M_PI, d),     measure_step(label, -1, d)};
  return c;
}

OperatorMatrix gaussian_two_mode(const GaussianKind& kind, const SpaceLayout& layout) {
  if (layout.mode_count() < 2) {
    throw Error(ErrorKind::kLayoutMismatch, "gaussian_two_mode needs two oscillator modes");
  }
  const int n0 = layout.dim(0), n1 = layout.dim(1);
  const CMat a = kron(annihilation(n0).entries(), CMat::Identity(n1, n1));
  const CMat b = kron(CMat::Identity(n0, n0), annihilation(n1).entries());
  CMat h;
  double t = 0.0;
  if (const auto* bs = std::get_if<BeamSplitter>(&kind)) {
    h = bs->g * a.adjoint() * b + std::conj(bs->g) * b.adjoint() * a;
    t = bs->t;
  } else {
    const auto& tms = std::get<TwoModeSqueeze>(kind);
    h = tms.eta * a * b + std::conj(tms.eta) * a.adjoint() * b.adjoint();
    t = tms.t;
  }
  CMat u = expm(cplx(0, -t) * h);
  const Eigen::Index rest = layout.total_dim() / (static_cast<Eigen::Index>(n0) * n1);
  if (rest > 1) u = kron(u, CMat::Identity(rest, rest));
  return OperatorMatrix(layout, u);
}

}  // namespace gridsim
