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

#include "gridsim/noise.hpp"

#include <cmath>
#include <sstream>

#include "gridsim/error.hpp"

namespace gridsim {

void NoiseModel::validate() const {
  if (!(kappa >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "kappa must be >= 0");
  if (!(kappa_phi >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "kappa_phi must be >= 0");
  if (aux_t1 && !(*aux_t1 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "aux_T1 must be > 0");
  if (aux_t2 && !(*aux_t2 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "aux_T2 must be > 0");
  if (aux_t1 && aux_t2 && *aux_t2 > 2.0 * *aux_t1) {
    throw Error(ErrorKind::kInvalidArgument, "aux_T2 must not exceed 2 * aux_T1");
  }
  for (double t : {durations.rotation, durations.displacement, durations.ecd,
                   durations.measure_reset}) {
    if (!(t >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "gate durations must be >= 0");
  }
}

nlohmann::json NoiseModel::to_json() const {
  nlohmann::json j;
  j["kappa"] = kappa;
  j["kappa_phi"] = kappa_phi;
  j["aux_T1"] = aux_t1 ? nlohmann::json(*aux_t1) : nlohmann::json(nullptr);
  j["aux_T2"] = aux_t2 ? nlohmann::json(*aux_t2) : nlohmann::json(nullptr);
  j["gate_durations"] = {{"rotation", durations.rotation},
                         {"displacement", durations.displacement},
                         {"ecd", durations.ecd},
                         {"measure_reset", durations.measure_reset}};
  return j;
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
  NoiseModel n;
  n.kappa = j.value("kappa", 0.0);
  n.kappa_phi = j.value("kappa_phi", 0.0);
  if (j.contains("aux_T1") && !j["aux_T1"].is_null()) n.aux_t1 = j["aux_T1"].get<double>();
  if (j.contains("aux_T2") && !j["aux_T2"].is_null()) n.aux_t2 = j["aux_T2"].get<double>();
  if (j.contains("gate_durations")) {
    const auto& g = j["gate_durations"];
    n.durations.rotation = g.value("rotation", n.durations.rotation);
    n.durations.displacement = g.value("displacement", n.durations.displacement);
    n.durations.ecd = g.value("ecd", n.durations.ecd);
    n.durations.measure_reset = g.value("measure_reset", n.durations.measure_reset);
  }
  n.validate();
  return n;
}

double KrausSet::completeness_defect() const {
  if (ops.empty()) return 1.0;
  const Eigen::Index d = ops.front().rows();
  CMat s = CMat::Zero(d, d);
  for (const auto& k : ops) s += k.adjoint() * k;
  return (s - CMat::Identity(d, d)).cwiseAbs().maxCoeff();
}

std::vector<OperatorMatrix> KrausSet::full(const SpaceLayout& layout) const {
  std::vector<OperatorMatrix> out;
  for (const auto& k : ops) {
    out.push_back(embed(OperatorMatrix(SpaceLayout({static_cast<int>(k.rows())}), k), subsystem,
                        layout));
  }
  return out;
}

KrausSet loss_channel(double kappa_t, const SpaceLayout& layout, int mode) {
  if (!(kappa_t >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "kappa*t must be >= 0");
  if (mode < 0 || mode >= layout.mode_count()) {
    throw Error(ErrorKind::kIndexOutOfRange, "loss_channel: mode out of range");
  }
  const int n = layout.dim(mode);
  KrausSet ks{mode, {}, "loss"};
  if (kappa_t == 0.0) {
    ks.ops.push_back(CMat::Identity(n, n));
    return ks;
  }
  const double gamma = -std::expm1(-kappa_t);
  const double lg = std::log(gamma), l1g = -kappa_t;  // log(1 - gamma)
  Eigen::VectorXd covered = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    CMat op = CMat::Zero(n, n);
    for (int m = k; m < n; ++m) {
      const double logc = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
      const double w = std::exp(logc + (m - k) * l1g + k * lg);
      op(m - k, m) = std::sqrt(w);
      covered(m) += w;
    }
    ks.ops.push_back(op);
    if ((1.0 - covered.array()).abs().maxCoeff() < 1e-12) break;
  }
  return ks;
}

KrausSet dephasing_channel(double kappa_phi_t, const SpaceLayout& layout, int mode) {
  if (!(kappa_phi_t >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "kappa_phi*t must be >= 0");
  if (mode < 0 || mode >= layout.mode_count()) {
    throw Error(ErrorKind::kIndexOutOfRange, "dephasing_channel: mode out of range");
  }
  const int n = layout.dim(mode);
  KrausSet ks{mode, {}, "dephasing"};
  if (kappa_phi_t == 0.0) {
    ks.ops.push_back(CMat::Identity(n, n));
    return ks;
  }
  // rho_mn -> exp(-s (m-n)^2 / 2) rho_mn; Kraus from the eigenvectors of that kernel.
  Eigen::MatrixXd c(n, n);
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) c(m, k) = std::exp(-0.5 * kappa_phi_t * (m - k) * (m - k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  double dropped = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);  // ascending
    if (lam <= 0.0 || dropped + lam < 1e-13) {
      dropped += std::max(lam, 0.0);
      continue;
    }
    CMat op = CMat::Zero(n, n);
    for (int m = 0; m < n; ++m) op(m, m) = std::sqrt(lam) * es.eigenvectors()(m, i);
    ks.ops.push_back(op);
  }
  return ks;
}

KrausSet aux_decay_channels(std::optional<double> t1, std::optional<double> t2, double t,
                            const SpaceLayout& layout) {
  if (!(t >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "duration must be >= 0");
  if (t1 && t2 && *t2 > 2.0 * *t1) {
    throw Error(ErrorKind::kInvalidArgument, "aux_T2 must not exceed 2 * aux_T1");
  }
  KrausSet ks{layout.aux_index(), {}, "aux_decay"};
  const double p = t1 ? -std::expm1(-t / *t1) : 0.0;
  double rate_phi = 0.0;
  if (t2) rate_phi = 1.0 / *t2 - (t1 ? 0.5 / *t1 : 0.0);
  rate_phi = std::max(rate_phi, 0.0);
  const double q = 0.5 * (-std::expm1(-t * rate_phi));
  CMat a0(2, 2), a1(2, 2), z(2, 2);
  a0 << 1, 0, 0, std::sqrt(1.0 - p);
  a1 << 0, std::sqrt(p), 0, 0;
  z << 1, 0, 0, -1;
  for (const CMat& a : {a0, a1}) {
    if (a.cwiseAbs().maxCoeff() == 0.0) continue;
    ks.ops.push_back(std::sqrt(1.0 - q) * a);
    if (q > 0.0) ks.ops.push_back(std::sqrt(q) * z * a);
  }
  return ks;
}

std::vector<KrausSet> interval_channels(const NoiseModel& noise, const SpaceLayout& layout,
                                        double t) {
  std::vector<KrausSet> out;
  if (t <= 0.0) return out;
  for (int m = 0; m < layout.mode_count(); ++m) {
    if (noise.kappa > 0.0) out.push_back(loss_channel(noise.kappa * t, layout, m));
    if (noise.kappa_phi > 0.0) out.push_back(dephasing_channel(noise.kappa_phi * t, layout, m));
  }
  if (layout.has_aux() && (noise.aux_t1 || noise.aux_t2)) {
    out.push_back(aux_decay_channels(noise.aux_t1, noise.aux_t2, t, layout));
  }
  return out;
}

void apply_channel(DensityMatrix& rho, const KrausSet& k) {
  const SpaceLayout& l = rho.layout();
  CMat acc = CMat::Zero(rho.entries().rows(), rho.entries().cols());
  for (const auto& op : k.ops) {
    CMat x = rho.entries();
    apply_local_columns(x, l, k.subsystem, op);  // K rho
    CMat y = x.adjoint();                        // rho K^dag
    apply_local_columns(y, l, k.subsystem, op);  // K rho K^dag
    acc += y;
  }
  rho.entries() = acc;
}

int apply_channel(QuantumState& psi, const KrausSet& k, CounterRng& rng) {
  if (k.ops.size() == 1) {
    apply_local(psi.amplitudes(), psi.layout(), k.subsystem, k.ops[0]);
    psi.normalize();
    return 0;
  }
  const double u = rng.uniform();
  const double total = psi.amplitudes().squaredNorm();
  double cum = 0.0;
  CVec last;
  for (size_t i = 0; i < k.ops.size(); ++i) {
    CVec v = psi.amplitudes();
    apply_local(v, psi.layout(), k.subsystem, k.ops[i]);
    const double w = v.squaredNorm() / total;
    cum += w;
    if (w > 0.0) last = v;
    if (u < cum && w > 1e-300) {
      psi.amplitudes() = v;
      psi.normalize();
      return static_cast<int>(i);
    }
  }
  if (last.size() == 0 || last.squaredNorm() < 1e-14 * total) {
    throw Error(ErrorKind::kMeasurementUnderflow, "all Kraus branches underflowed");
  }
  psi.amplitudes() = last;
  psi.normalize();
  return static_cast<int>(k.ops.size()) - 1;
}

Circuit inject_error(const Circuit& circuit, const ErrorInjection& inj) {
  if (inj.step_index < 0 || inj.step_index >= static_cast<int>(circuit.steps.size())) {
    throw Error(ErrorKind::kIndexOutOfRange, "injection step index out of range");
  }
  if (!(inj.fraction >= 0.0 && inj.fraction <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "injection fraction must lie in [0, 1]");
  }
  const GateStep& target = circuit.steps[inj.step_index];
  const bool interior = inj.fraction > 0.0 && inj.fraction < 1.0;
  const auto* e = std::get_if<Ecd>(&target.kind);
  if (interior && !e) {
    throw Error(ErrorKind::kInvalidArgument, "only an Ecd step can be split mid-gate");
  }
  std::ostringstream note;
  GateStep err;
  if (inj.kind == ErrorInjection::Kind::kAuxDecay) {
    note << "aux_decay@" << inj.fraction;
    err = GateStep{Jump{JumpKind::kAuxLower, 0}, 0.0, note.str()};
  } else {
    bool zero = true;
    for (const auto& a : inj.alpha) zero = zero && a == cplx(0.0);
    if (zero) return circuit;
    note << "displacement@" << inj.fraction;
    err = GateStep{Displacement{inj.alpha}, 0.0, note.str()};
  }
  Circuit out{circuit.layout, {}};
  for (int i = 0; i < static_cast<int>(circuit.steps.size()); ++i) {
    if (i != inj.step_index) {
      out.steps.push_back(circuit.steps[i]);
      continue;
    }
    if (!interior) {
      if (inj.fraction == 0.0) out.steps.push_back(err);
      out.steps.push_back(target);
      if (inj.fraction == 1.0) out.steps.push_back(err);
      continue;
    }
    const double f = inj.fraction;
    std::vector<cplx> b1 = e->beta, b2 = e->beta;
    for (auto& z : b1) z *= f;
    for (auto& z : b2) z *= (1.0 - f);
    out.steps.push_back(GateStep{ConditionalDisplacement{b1}, f * target.duration, target.annotation});
    out.steps.push_back(err);
    out.steps.push_back(GateStep{ConditionalDisplacement{b2}, (1.0 - f) * target.duration, {}});
    out.steps.push_back(GateStep{AuxFlip{}, 0.0, {}});
  }
  return out;
}

}  // namespace gridsim
