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

#include "gridsim/simulator.hpp"

#include <map>

#include "gridsim/error.hpp"

namespace gridsim {

namespace {

constexpr double kUnderflow = 1e-14;

CMat pauli_x() {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

CMat sigma_minus() {
  CMat s(2, 2);
  s << 0, 1, 0, 0;
  return s;
}

}  // namespace

CompiledCircuit::CompiledCircuit(const Circuit& circuit, const std::optional<NoiseModel>& noise,
                                 Target target)
    : layout_(circuit.layout), target_(target) {
  circuit.validate();
  if (noise) noise->validate();
  std::map<int, DisplacementKernel> kernels;
  auto kernel = [&](int k) -> const DisplacementKernel& {
    const int d = layout_.dim(k);
    auto it = kernels.find(d);
    if (it == kernels.end()) it = kernels.emplace(d, DisplacementKernel(d)).first;
    return it->second;
  };
  std::map<double, std::vector<int>> channel_cache;
  auto channels_for = [&](double t) -> std::vector<int> {
    if (!noise || noise->is_noiseless() || t <= 0.0) return {};
    auto it = channel_cache.find(t);
    if (it != channel_cache.end()) return it->second;
    std::vector<int> ids;
    for (auto& ks : interval_channels(*noise, layout_, t)) {
      ids.push_back(static_cast<int>(channels_.size()));
      channels_.push_back(std::move(ks));
    }
    channel_cache.emplace(t, ids);
    return ids;
  };

  const int modes = layout_.mode_count();
  for (const GateStep& step : circuit.steps) {
    Op op;
    op.annotation = step.annotation;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, AuxRotation>) {
            op.local.push_back({layout_.aux_index(), -1, aux_rotation_matrix(k.theta, k.phi)});
          } else if constexpr (std::is_same_v<T, Ecd> ||
                               std::is_same_v<T, ConditionalDisplacement>) {
            for (int m = 0; m < modes; ++m) {
              if (k.beta[m] == cplx(0.0)) continue;
              op.local.push_back({m, 0, kernel(m).matrix(k.beta[m] / 2.0)});
              op.local.push_back({m, 1, kernel(m).matrix(-k.beta[m] / 2.0)});
            }
            if constexpr (std::is_same_v<T, Ecd>) {
              op.local.push_back({layout_.aux_index(), -1, pauli_x()});
            }
          } else if constexpr (std::is_same_v<T, Displacement>) {
            for (int m = 0; m < modes; ++m) {
              if (k.alpha[m] == cplx(0.0)) continue;
              op.local.push_back({m, -1, kernel(m).matrix(k.alpha[m])});
            }
          } else if constexpr (std::is_same_v<T, AuxFlip>) {
            op.local.push_back({layout_.aux_index(), -1, pauli_x()});
          } else if constexpr (std::is_same_v<T, Jump>) {
            op.type = Type::kJump;
            if (k.kind == JumpKind::kAuxLower) {
              op.local.push_back({layout_.aux_index(), -1, sigma_minus()});
            } else {
              op.local.push_back({k.mode, -1, annihilation(layout_.dim(k.mode)).entries()});
            }
          } else if constexpr (std::is_same_v<T, AuxMeasureReset>) {
            op.type = Type::kMeasure;
            op.label = k.label;
            op.round = k.round;
          }
        },
        step.kind);
    op.channels = channels_for(step.duration);
    if (target_ == Target::kDensity && op.type != Type::kMeasure) {
      op.full = CMat::Identity(layout_.total_dim(), layout_.total_dim());
      for (const auto& lo : op.local) {
        apply_local_columns(op.full, layout_, lo.subsystem, lo.m, lo.aux_value);
      }
      op.local.clear();
      // Fold consecutive noise-free unitaries into one matrix.
      if (op.type == Type::kUnitary && !ops_.empty() && ops_.back().type == Type::kUnitary &&
          ops_.back().channels.empty() && op.annotation.empty()) {
        ops_.back().full = op.full * ops_.back().full;
        ops_.back().channels = op.channels;
        continue;
      }
    }
    if (op.type == Type::kUnitary && op.local.empty() && op.full.size() == 0 &&
        op.channels.empty() && op.annotation.empty()) {
      continue;
    }
    ops_.push_back(std::move(op));
  }
  if (target_ == Target::kDensity) {
    for (const auto& ks : channels_) {
      std::vector<CMat> full;
      for (const auto& o : ks.full(layout_)) full.push_back(o.entries());
      channels_full_.push_back(std::move(full));
    }
  }
}

void CompiledCircuit::record_measure(const Op& op, int outcome, double p1, RunRecord& rec,
                                     SbsTrace* trace, std::string& pending) const {
  rec.outcomes.push_back(outcome);
  rec.p_one.push_back(p1);
  rec.labels.push_back(op.label);
  if (trace && outcome >= 0) {
    int round = op.round;
    if (round < 0) round = trace->size() ? trace->entries().back().round_index + 1 : 0;
    trace->append(TraceEntry{round, op.label, outcome, pending});
  }
  pending.clear();
}

RunRecord CompiledCircuit::run(QuantumState& psi, CounterRng& rng, SbsTrace* trace) const {
  if (target_ != Target::kTrajectory) {
    throw Error(ErrorKind::kInvalidArgument, "circuit was compiled for density matrices");
  }
  if (psi.layout() != layout_) throw Error(ErrorKind::kLayoutMismatch, "state layout mismatch");
  RunRecord rec;
  std::string pending;
  CVec& v = psi.amplitudes();
  for (const Op& op : ops_) {
    if (!op.annotation.empty()) pending += (pending.empty() ? "" : ";") + op.annotation;
    switch (op.type) {
      case Type::kUnitary:
        for (const auto& lo : op.local) apply_local(v, layout_, lo.subsystem, lo.m, lo.aux_value);
        break;
      case Type::kJump: {
        for (const auto& lo : op.local) apply_local(v, layout_, lo.subsystem, lo.m, lo.aux_value);
        if (v.squaredNorm() < kUnderflow) {
          throw Error(ErrorKind::kMeasurementUnderflow, "jump branch has vanishing weight");
        }
        psi.normalize();
        break;
      }
      case Type::kMeasure: {
        const Eigen::Index osc = v.size() / 2;
        double p1 = 0.0;
        for (Eigen::Index o = 0; o < osc; ++o) p1 += std::norm(v(2 * o + 1));
        p1 /= v.squaredNorm();
        const int b = rng.uniform() < p1 ? 1 : 0;
        const double pb = b ? p1 : 1.0 - p1;
        if (pb < kUnderflow) {
          throw Error(ErrorKind::kMeasurementUnderflow, "measurement outcome probability underflow");
        }
        for (Eigen::Index o = 0; o < osc; ++o) {
          v(2 * o) = v(2 * o + b);
          v(2 * o + 1) = 0.0;
        }
        psi.normalize();
        record_measure(op, b, p1, rec, trace, pending);
        break;
      }
    }
    for (int c : op.channels) apply_channel(psi, channels_[c], rng);
  }
  rec.warnings = truncation_warnings(tail_mass(psi));
  return rec;
}

RunRecord CompiledCircuit::run(DensityMatrix& rho, MeasureMode mode, CounterRng* rng,
                               SbsTrace* trace) const {
  if (target_ != Target::kDensity) {
    throw Error(ErrorKind::kInvalidArgument, "circuit was compiled for trajectories");
  }
  if (rho.layout() != layout_) throw Error(ErrorKind::kLayoutMismatch, "state layout mismatch");
  if (mode == MeasureMode::kSample && !rng) {
    throw Error(ErrorKind::kInvalidArgument, "sampled measurement needs an rng");
  }
  RunRecord rec;
  std::string pending;
  CMat& m = rho.entries();
  const Eigen::Index osc = m.rows() / 2;
  for (const Op& op : ops_) {
    if (!op.annotation.empty()) pending += (pending.empty() ? "" : ";") + op.annotation;
    switch (op.type) {
      case Type::kUnitary:
        m = op.full * m * op.full.adjoint();
        break;
      case Type::kJump: {
        m = op.full * m * op.full.adjoint();
        const double tr = m.trace().real();
        if (tr < kUnderflow) {
          throw Error(ErrorKind::kMeasurementUnderflow, "jump branch has vanishing weight");
        }
        m /= tr;
        break;
      }
      case Type::kMeasure: {
        const double tr = m.trace().real();
        double p1 = 0.0;
        for (Eigen::Index o = 0; o < osc; ++o) p1 += m(2 * o + 1, 2 * o + 1).real();
        p1 /= tr;
        CMat out = CMat::Zero(m.rows(), m.cols());
        int b = -1;
        if (mode == MeasureMode::kAverage) {
          for (Eigen::Index j = 0; j < osc; ++j) {
            for (Eigen::Index i = 0; i < osc; ++i) {
              out(2 * i, 2 * j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
            }
          }
        } else {
          b = rng->uniform() < p1 ? 1 : 0;
          const double pb = b ? p1 : 1.0 - p1;
          if (pb < kUnderflow) {
            throw Error(ErrorKind::kMeasurementUnderflow,
                        "measurement outcome probability underflow");
          }
          for (Eigen::Index j = 0; j < osc; ++j) {
            for (Eigen::Index i = 0; i < osc; ++i) {
              out(2 * i, 2 * j) = m(2 * i + b, 2 * j + b) / (pb * tr);
            }
          }
        }
        m = std::move(out);
        record_measure(op, b, p1, rec, trace, pending);
        break;
      }
    }
    for (int c : op.channels) {
      CMat acc = CMat::Zero(m.rows(), m.cols());
      for (const auto& k : channels_full_[c]) acc.noalias() += k * m * k.adjoint();
      m = std::move(acc);
    }
  }
  rec.warnings = truncation_warnings(tail_mass(rho));
  return rec;
}

RunRecord run_circuit(const Circuit& circuit, QuantumState& state,
                      const std::optional<NoiseModel>& noise, std::uint64_t seed,
                      SbsTrace* trace) {
  CompiledCircuit cc(circuit, noise, CompiledCircuit::Target::kTrajectory);
  CounterRng rng(seed);
  return cc.run(state, rng, trace);
}

RunRecord run_circuit(const Circuit& circuit, DensityMatrix& rho,
                      const std::optional<NoiseModel>& noise, MeasureMode mode,
                      std::uint64_t seed, SbsTrace* trace) {
  CompiledCircuit cc(circuit, noise, CompiledCircuit::Target::kDensity);
  CounterRng rng(seed);
  return cc.run(rho, mode, &rng, trace);
}

}  // namespace gridsim
