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

#include <gtest/gtest.h>

#include <cmath>

#include "gridsim/circuit.hpp"
#include "gridsim/error.hpp"
#include "gridsim/noise.hpp"
#include "gridsim/simulator.hpp"
#include "support.hpp"

namespace gridsim {
namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

DensityMatrix coherent_dm(cplx alpha, int dim) {
  return DensityMatrix::from_state(QuantumState(SpaceLayout({dim}), testing::coherent(alpha, dim)));
}

TEST(Loss, IdentityAtZeroAndCompleteness) {
  const SpaceLayout l({20});
  const KrausSet k0 = loss_channel(0.0, l, 0);
  ASSERT_EQ(k0.ops.size(), 1u);
  EXPECT_LT(max_abs(k0.ops[0] - CMat::Identity(20, 20)), 1e-15);
  for (double kt : {1e-4, 0.01, 0.3, 2.0, 10.0}) {
    EXPECT_LT(loss_channel(kt, l, 0).completeness_defect(), 1e-10) << kt;
  }
}

TEST(Loss, CoherentStateStaysCoherent) {
  const int d = 40;
  const cplx alpha(1.2, -0.7);
  const double kt = 0.35;
  DensityMatrix rho = coherent_dm(alpha, d);
  apply_channel(rho, loss_channel(kt, rho.layout(), 0));
  const DensityMatrix expect = coherent_dm(alpha * std::exp(-kt / 2), d);
  EXPECT_LT(max_abs(rho.entries() - expect.entries()), 1e-8);
  const double n = expectation(rho, number_operator(d)).real();
  EXPECT_NEAR(n, std::norm(alpha) * std::exp(-kt), 1e-8);
  EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
}

TEST(Dephasing, PopulationsAndCoherenceDecay) {
  const int d = 30;
  const SpaceLayout l({d});
  EXPECT_EQ(dephasing_channel(0.0, l, 0).ops.size(), 1u);
  const double s = 0.2;
  const KrausSet k = dephasing_channel(s, l, 0);
  EXPECT_LT(k.completeness_defect(), 1e-10);
  const cplx alpha(1.0, 0.5);
  DensityMatrix rho = coherent_dm(alpha, d);
  const Eigen::VectorXd pop0 = rho.entries().diagonal().real();
  apply_channel(rho, k);
  EXPECT_LT((rho.entries().diagonal().real() - pop0).cwiseAbs().maxCoeff(), 1e-12);
  const cplx a0 = expectation(coherent_dm(alpha, d), annihilation(d));
  const cplx a1 = expectation(rho, annihilation(d));
  EXPECT_LT(std::abs(a1 - a0 * std::exp(-s / 2)), 1e-6);
}

TEST(AuxDecay, RatesAndValidation) {
  const SpaceLayout l = SpaceLayout::with_aux({3});
  EXPECT_LT(aux_decay_channels(20e-6, 30e-6, 0.0, l).completeness_defect(), 1e-12);
  const KrausSet k = aux_decay_channels(20e-6, 30e-6, 20e-6, l);
  EXPECT_LT(k.completeness_defect(), 1e-12);
  DensityMatrix rho = DensityMatrix::from_state(QuantumState::basis(l, {0, 1}));
  apply_channel(rho, k);
  const double pe = rho.entries()(1, 1).real();
  EXPECT_NEAR(pe, std::exp(-1.0), 1e-10);

  // Coherence decays as e^{-t/T2}.
  CVec plus = CVec::Zero(6);
  plus(0) = plus(1) = 1 / std::sqrt(2.0);
  DensityMatrix r2 = DensityMatrix::from_state(QuantumState(l, plus));
  const double t = 7e-6;
  apply_channel(r2, aux_decay_channels(20e-6, 30e-6, t, l));
  EXPECT_NEAR(std::abs(r2.entries()(0, 1)), 0.5 * std::exp(-t / 30e-6), 1e-10);

  EXPECT_THROW(aux_decay_channels(10e-6, 30e-6, 1e-6, l), Error);
  NoiseModel n;
  n.aux_t1 = 10e-6;
  n.aux_t2 = 25e-6;
  EXPECT_THROW(n.validate(), Error);
  n.aux_t2 = 15e-6;
  EXPECT_NO_THROW(n.validate());
  n.kappa = -1;
  EXPECT_THROW(n.validate(), Error);
}

TEST(ApplyChannel, IdentityTraceAndDeterminism) {
  const SpaceLayout l = SpaceLayout::with_aux({12});
  DensityMatrix rho = DensityMatrix::from_state(
      QuantumState(l, CVec::Random(l.total_dim()).normalized()));
  const CMat before = rho.entries();
  apply_channel(rho, loss_channel(0.0, l, 0));
  EXPECT_LT(max_abs(rho.entries() - before), 1e-15);
  apply_channel(rho, loss_channel(0.4, l, 0));
  apply_channel(rho, aux_decay_channels(1e-6, 1.5e-6, 1e-6, l));
  EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-12);
  EXPECT_NO_THROW(rho.validate(1e-10));

  const QuantumState start(l, CVec::Random(l.total_dim()).normalized());
  std::vector<int> a, b;
  for (auto* out : {&a, &b}) {
    QuantumState psi = start;
    CounterRng rng(99);
    for (int i = 0; i < 20; ++i) out->push_back(apply_channel(psi, loss_channel(0.3, l, 0), rng));
  }
  EXPECT_EQ(a, b);
}

TEST(ApplyChannel, ProductChannelsCommuteOnDisjointModes) {
  const SpaceLayout l = SpaceLayout::oscillators({6, 5});
  const DensityMatrix start = DensityMatrix::from_state(
      QuantumState(l, CVec::Random(l.total_dim()).normalized()));
  DensityMatrix a = start, b = start;
  const KrausSet k0 = loss_channel(0.3, l, 0);
  const KrausSet k1 = dephasing_channel(0.5, l, 1);
  apply_channel(a, k0);
  apply_channel(a, k1);
  apply_channel(b, k1);
  apply_channel(b, k0);
  EXPECT_LT(max_abs(a.entries() - b.entries()), 1e-12);
}

TEST(NoiseModel, JsonRoundTrip) {
  NoiseModel n;
  n.kappa = 370.0;
  n.kappa_phi = 12.5;
  n.aux_t1 = 40e-6;
  n.durations.ecd = 250e-9;
  const NoiseModel r = NoiseModel::from_json(n.to_json());
  EXPECT_EQ(r.to_json(), n.to_json());
  EXPECT_FALSE(r.aux_t2.has_value());
  EXPECT_TRUE(NoiseModel{}.is_noiseless());
}

TEST(Injection, ZeroDisplacementLeavesCircuitUnchanged) {
  const SpaceLayout l = SpaceLayout::with_aux({10});
  const Circuit c{l, {rotation_step(1.0, 0.0), ecd_step({1.0}), measure_step("m", 0)}};
  ErrorInjection inj;
  inj.kind = ErrorInjection::Kind::kDisplacement;
  inj.fraction = 0.0;
  inj.step_index = 1;
  inj.alpha = {0.0};
  EXPECT_EQ(inject_error(c, inj).to_json(), c.to_json());
  inj.kind = ErrorInjection::Kind::kAuxDecay;
  inj.step_index = 0;
  inj.fraction = 0.5;
  EXPECT_THROW(inject_error(c, inj), Error);
  inj.step_index = 7;
  EXPECT_THROW(inject_error(c, inj), Error);
}

// Oscillator part of the final state when the aux decays at `f` of ECD(beta),
// started in |0>|aux0>. The aux must be excited at the decay point.
CVec decayed_oscillator(const SpaceLayout& l, cplx beta, double f, int aux0) {
  const Circuit c{l, {ecd_step({beta})}};
  ErrorInjection inj;
  inj.step_index = 0;
  inj.fraction = f;
  QuantumState psi = QuantumState::basis(l, {0, aux0});
  run_circuit(inject_error(c, inj), psi, std::nullopt, 3);
  CVec osc(l.dim(0));
  const int aux = psi.amplitudes()(1) != cplx(0.0) ? 1 : 0;
  for (int n = 0; n < l.dim(0); ++n) osc(n) = psi.amplitudes()(2 * n + aux);
  return osc.normalized();
}

TEST(Injection, MidGateDecayOffsetsByHalfTheBigEcd) {
  const int d = 60;
  const SpaceLayout l = SpaceLayout::with_aux({d});
  const cplx beta(2.5, 0.0);
  QuantumState ok = QuantumState::basis(l, {0, 1});
  run_circuit(Circuit{l, {ecd_step({beta})}}, ok, std::nullopt, 3);
  CVec clean(d);
  for (int n = 0; n < d; ++n) clean(n) = ok.amplitudes()(2 * n);  // ECD maps e -> g
  const CVec decayed = decayed_oscillator(l, beta, 0.5, 1);
  const CVec shifted = displacement(beta / 2.0, d).entries() * clean;
  EXPECT_NEAR(std::abs(shifted.dot(decayed)), 1.0, 1e-10);

  // Decay after the completed gate: started in g, the ECD leaves the aux in e
  // and the oscillator at D(beta/2)|0>; the decay only flips the aux back.
  QuantumState ok_g = QuantumState::basis(l, {0, 0});
  run_circuit(Circuit{l, {ecd_step({beta})}}, ok_g, std::nullopt, 3);
  CVec clean_g(d);
  for (int n = 0; n < d; ++n) clean_g(n) = ok_g.amplitudes()(2 * n + 1);
  const CVec late = decayed_oscillator(l, beta, 1.0, 0);
  EXPECT_NEAR(std::abs(clean_g.dot(late)), 1.0, 1e-10);
}

TEST(Injection, InteriorSplitStructure) {
  const SpaceLayout l = SpaceLayout::with_aux({10});
  const Circuit c{l, {ecd_step({2.0})}};
  ErrorInjection inj;
  inj.fraction = 0.25;
  const Circuit o = inject_error(c, inj);
  ASSERT_EQ(o.steps.size(), 4u);
  EXPECT_NEAR(std::get<ConditionalDisplacement>(o.steps[0].kind).beta[0].real(), 0.5, 1e-15);
  EXPECT_EQ(o.steps[1].annotation, "aux_decay@0.25");
  EXPECT_NEAR(std::get<ConditionalDisplacement>(o.steps[2].kind).beta[0].real(), 1.5, 1e-15);
  EXPECT_TRUE(std::holds_alternative<AuxFlip>(o.steps[3].kind));
  EXPECT_NEAR(o.duration(), c.duration(), 1e-18);
}

}  // namespace
}  // namespace gridsim
