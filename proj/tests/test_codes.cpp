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

#include "gridsim/codes.hpp"
#include "gridsim/error.hpp"
#include "support.hpp"

namespace gridsim {
namespace {

const cplx I(0.0, 1.0);
const double kTwoPi = 2 * M_PI;

// Distance of x from the nearest multiple of `unit`.
double off_multiple(double x, double unit) { return std::abs(x - unit * std::round(x / unit)); }

double odd_pi_offset(double x) { return off_multiple(x - M_PI, kTwoPi); }

void expect_code_algebra(const CodeSpec& c) {
  for (const auto& a : c.stabilizers) {
    for (const auto& b : c.stabilizers) {
      EXPECT_LT(off_multiple(symplectic_phase(a, b), kTwoPi), 1e-12) << a.label << b.label;
    }
    for (const auto* l : {&c.logical_x, &c.logical_z}) {
      EXPECT_LT(off_multiple(symplectic_phase(*l, a), kTwoPi), 1e-12) << l->label << a.label;
    }
  }
  EXPECT_LT(odd_pi_offset(symplectic_phase(c.logical_x, c.logical_z)), 1e-12);
  EXPECT_NO_THROW(c.validate());
}

TEST(Codes, LatticeConstant) {
  EXPECT_NEAR(lattice_constant(), 2 * std::sqrt(M_PI), 1e-12);
  EXPECT_NEAR(lattice_constant(), 3.5449077, 1e-7);
}

TEST(Codes, GkpVectorsAndPhases) {
  const CodeSpec c = gkp_square(0.3);
  const double l = lattice_constant();
  EXPECT_EQ(c.mode_count, 1);
  const auto& tq = c.stabilizers[c.stabilizer_index("T_q")];
  const auto& tp = c.stabilizers[c.stabilizer_index("T_p")];
  EXPECT_LT(std::abs(tq.alpha[0] - I * l / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(std::abs(tp.alpha[0] - l / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(std::abs(c.logical_z.alpha[0] - I * l / (2 * std::sqrt(2.0))), 1e-15);
  EXPECT_LT(std::abs(c.logical_x.alpha[0] - l / (2 * std::sqrt(2.0))), 1e-15);
  // Commutation phase 2 Im(a b*): l^2 = 4 pi for the stabilizers, l^2 / 4 = pi for the logicals.
  EXPECT_NEAR(std::abs(symplectic_phase(tq, tp)), 2 * kTwoPi, 1e-12);
  EXPECT_NEAR(std::abs(symplectic_phase(c.logical_z, c.logical_x)), M_PI, 1e-12);
  expect_code_algebra(c);
}

TEST(Codes, TesseractAlgebraAndIsthmus) {
  const CodeSpec c = tesseract(0.3);
  EXPECT_EQ(c.mode_count, 2);
  EXPECT_EQ(c.stabilizers.size(), 4u);
  expect_code_algebra(c);
  for (const auto* l : {&c.logical_x, &c.logical_z}) {
    for (const auto& s : c.stabilizers) {
      const double ang = phase_space_angle(*l, s);
      EXPECT_GT(std::min(ang, M_PI - ang), 1e-3) << l->label << " vs " << s.label;
    }
  }
  // Direct vectors: T1 = exp(-i l p1 / 2^{1/4}) is D(l / (2^{1/4} sqrt2)) on mode 1.
  const double l = lattice_constant();
  const auto& t1 = c.stabilizers[c.stabilizer_index("T1")];
  EXPECT_LT(std::abs(t1.alpha[0] - l / std::pow(2.0, 0.25) / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(std::abs(t1.alpha[1]), 1e-15);
  const auto& t4 = c.stabilizers[c.stabilizer_index("T4")];
  const double d = l / std::pow(2.0, 0.75) / std::sqrt(2.0);
  EXPECT_LT(std::abs(t4.alpha[0] - I * d), 1e-15);
  EXPECT_LT(std::abs(t4.alpha[1] + I * d), 1e-15);
}

TEST(Codes, DeltaRangeAndValidation) {
  EXPECT_THROW(gkp_square(0.0), Error);
  EXPECT_THROW(gkp_square(1.0), Error);
  EXPECT_THROW(tesseract(1.5), Error);
  CodeSpec c = gkp_square(0.3);
  c.logical_x = c.logical_z;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(c.stabilizer_index("nope"), Error);
}

TEST(Codes, JsonRoundTrip) {
  for (const CodeSpec& c : {gkp_square(0.25), tesseract(0.3)}) {
    const CodeSpec r = code_from_json(code_to_json(c));
    EXPECT_EQ(r.name, c.name);
    EXPECT_EQ(r.mode_count, c.mode_count);
    EXPECT_DOUBLE_EQ(r.delta, c.delta);
    ASSERT_EQ(r.stabilizers.size(), c.stabilizers.size());
    for (size_t i = 0; i < c.stabilizers.size(); ++i) {
      EXPECT_EQ(r.stabilizers[i].label, c.stabilizers[i].label);
      EXPECT_EQ(r.stabilizers[i].alpha, c.stabilizers[i].alpha);
    }
    EXPECT_EQ(r.logical_x.alpha, c.logical_x.alpha);
  }
  EXPECT_THROW(code_from_json(nlohmann::json{{"name", "gkp"}}), Error);
}

TEST(Dressing, SimilarityScalingOfAnnihilation) {
  const int d = 40;
  const double delta = 0.3;
  Eigen::VectorXcd e(d), einv(d);
  for (int n = 0; n < d; ++n) {
    e(n) = std::exp(-delta * delta * n);
    einv(n) = std::exp(delta * delta * n);
  }
  const CMat a = annihilation(d).entries();
  const CMat lhs = e.asDiagonal() * a * einv.asDiagonal();
  EXPECT_LT((lhs - std::exp(delta * delta) * a).cwiseAbs().maxCoeff(), 1e-10);
  const CMat lhs2 = e.asDiagonal() * CMat(a.adjoint()) * einv.asDiagonal();
  EXPECT_LT((lhs2 - std::exp(-delta * delta) * CMat(a.adjoint())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Dressing, MatchesDirectSimilarityTransform) {
  const int d = 40;
  const double delta = 0.3;
  const CodeSpec c = gkp_square(delta);
  Eigen::VectorXcd e(d), einv(d);
  for (int n = 0; n < d; ++n) {
    e(n) = std::exp(-delta * delta * n);
    einv(n) = std::exp(delta * delta * n);
  }
  for (const auto& s : c.stabilizers) {
    const CMat direct = e.asDiagonal() * displacement(s.alpha[0], d).entries() * einv.asDiagonal();
    const CMat ours = dressed_factors(s, delta, {d})[0];
    EXPECT_LT((ours - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff(), 1e-9);
  }
  const CMat bare = dressed_factors(c.logical_z, 0.0, {d})[0];
  EXPECT_LT((bare - displacement(c.logical_z.alpha[0], d).entries()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(dressed_factors(c.logical_z, 1.2, {d}), Error);
}

TEST(Codewords, GkpQualityAndSigns) {
  const CodeSpec c = gkp_square(0.3);
  const SpaceLayout osc({80});
  const CodeWords cw = construct_codewords(c, osc);
  EXPECT_LT(std::abs(cw.ket_zero.amplitudes().dot(cw.ket_one.amplitudes())), 1e-6);
  for (double a : cw.achieved) EXPECT_GE(a, 0.99);
  const auto z = dressed_factors(c.logical_z, c.delta, {80});
  const double z0 = local_expectation(cw.ket_zero, z).real();
  const double z1 = local_expectation(cw.ket_one, z).real();
  EXPECT_GE(z0, 0.95);
  EXPECT_LE(z1, -0.95);
  const auto x = dressed_factors(c.logical_x, c.delta, {80});
  EXPECT_GE(local_expectation(cw.logical(LogicalState::kPlus), x).real(), 0.95);
  EXPECT_LE(local_expectation(cw.logical(LogicalState::kMinus), x).real(), -0.95);
  for (const auto& s : c.stabilizers) {
    const auto f = dressed_factors(s, c.delta, {80});
    EXPECT_GE(local_expectation(cw.ket_zero, f).real(), 0.99);
  }
}

TEST(Codewords, TruncatedStabilizerCommutatorVanishesWithDimension) {
  // The e^{-D^2 n} envelope leaves amplitude near the cutoff, so the truncated
  // commutator shrinks with the dimension rather than vanishing at a fixed one.
  const CodeSpec c = gkp_square(0.3);
  double prev = 1.0;
  for (int d : {80, 120, 160}) {
    const CodeWords cw = construct_codewords(c, SpaceLayout({d}));
    const CMat tq = displacement(c.stabilizers[0].alpha[0], d).entries();
    const CMat tp = displacement(c.stabilizers[1].alpha[0], d).entries();
    double worst = 0.0;
    for (const auto* s : {&cw.ket_zero, &cw.ket_one}) {
      const CVec v = s->amplitudes();
      worst = std::max(worst, (tq * (tp * v) - tp * (tq * v)).norm());
    }
    EXPECT_LT(worst, prev / 4) << d;
    prev = worst;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Codewords, PhotonNumberMatchesEnvelopeEstimate) {
  EXPECT_NEAR(mean_photon_estimate(0.2294), 9.0, 0.05);
  EXPECT_NEAR(mean_photon_estimate(1.0), 0.0, 1e-15);
  EXPECT_NEAR(mean_photon_estimate(0.5), 1.5, 1e-15);
  const CodeWords cw = construct_codewords(gkp_square(0.2294), SpaceLayout({80}));
  const OperatorMatrix n = number_operator(80);
  for (const auto* s : {&cw.ket_zero, &cw.ket_one}) {
    EXPECT_NEAR(expectation(*s, n).real(), 9.0, 1.0);
  }
}

TEST(Codewords, TesseractQuality) {
  const CodeSpec c = tesseract(0.3);
  const CodeWords cw = construct_codewords(c, SpaceLayout({50, 50}));
  EXPECT_LT(std::abs(cw.ket_zero.amplitudes().dot(cw.ket_one.amplitudes())), 1e-6);
  ASSERT_EQ(cw.achieved.size(), 4u);
  for (double a : cw.achieved) EXPECT_GE(a, 0.99);
  const auto z = dressed_factors(c.logical_z, c.delta, {50, 50});
  EXPECT_GT(local_expectation(cw.ket_zero, z).real(), 0.9);
  EXPECT_LT(local_expectation(cw.ket_one, z).real(), -0.9);
}

TEST(Codewords, QualityFloorViolationCarriesValues) {
  try {
    construct_codewords(gkp_square(0.3), SpaceLayout({12}));
    FAIL() << "expected a construction-quality error";
  } catch (const ConstructionQualityError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConstructionQuality);
    EXPECT_EQ(e.achieved().size(), 2u);
    EXPECT_LT(*std::min_element(e.achieved().begin(), e.achieved().end()), 0.99);
  }
  EXPECT_THROW(construct_codewords(gkp_square(0.3), SpaceLayout({40, 40})), Error);
}

TEST(Codewords, CorrectableShiftsAndFlips) {
  const CodeWords cw = construct_codewords(gkp_square(0.3), SpaceLayout({100}));
  const double half = std::sqrt(M_PI) / 2;  // correctable quadrature radius
  auto fid = [&](double shift, bool q) {
    // A q shift by u is D(u/sqrt2); it acts on the Z information.
    const cplx alpha = q ? cplx(shift / std::sqrt(2.0), 0) : cplx(0, shift / std::sqrt(2.0));
    return q ? testing::projection_recovery_fidelity(cw, LogicalState::kZero, LogicalState::kOne,
                                                     alpha)
             : testing::projection_recovery_fidelity(cw, LogicalState::kPlus,
                                                     LogicalState::kMinus, alpha);
  };
  for (bool q : {true, false}) {
    for (double f : {0.1, 0.25, 0.5, 0.7}) {
      EXPECT_GE(fid(f * half, q), 0.99) << f;
      EXPECT_GE(fid(-f * half, q), 0.99) << f;
    }
    for (double f : {1.05, 1.2, 1.4}) EXPECT_LT(fid(f * half, q), 0.5) << f;
  }
}

TEST(Codewords, CorrectableRadiusGrowsAsEnvelopeNarrows) {
  // The largest shift with recovery fidelity >= 0.99 approaches sqrt(pi)/2 as delta -> 0.
  const double half = std::sqrt(M_PI) / 2;
  double prev = 0.0;
  for (const auto& [delta, dim] : std::vector<std::pair<double, int>>{{0.3, 100}, {0.25, 100}, {0.2, 140}}) {
    const CodeWords cw = construct_codewords(gkp_square(delta), SpaceLayout({dim}));
    double radius = 0.0;
    for (double f = 0.5; f < 1.0; f += 0.01) {
      const double fid = testing::projection_recovery_fidelity(
          cw, LogicalState::kZero, LogicalState::kOne, cplx(f * half / std::sqrt(2.0), 0));
      if (fid < 0.99) break;
      radius = f;
    }
    EXPECT_GT(radius, prev) << delta;
    prev = radius;
  }
  EXPECT_GT(prev, 0.85);
}

TEST(Binomial, CodewordProperties) {
  const CodeWords b = binomial_11_codewords(8);
  const OperatorMatrix n = number_operator(8);
  EXPECT_NEAR(expectation(b.ket_zero, n).real(), 2.0, 1e-14);
  EXPECT_NEAR(expectation(b.ket_one, n).real(), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(b.ket_zero.amplitudes().dot(b.ket_one.amplitudes())), 0.0, 1e-15);
  auto odd_weight = [](const CVec& v) {
    double w = 0;
    for (Eigen::Index i = 1; i < v.size(); i += 2) w += std::norm(v(i));
    return w;
  };
  const CMat a = annihilation(8).entries();
  for (const auto* s : {&b.ket_zero, &b.ket_one}) {
    EXPECT_NEAR(odd_weight(s->amplitudes()), 0.0, 1e-15);
    const CVec lost = (a * s->amplitudes()).normalized();
    EXPECT_NEAR(odd_weight(lost), 1.0, 1e-14);
  }
  EXPECT_THROW(binomial_11_codewords(4), Error);
}

TEST(Hermite, ClosedFormsAndOrthonormality) {
  for (double x : {-2.0, 0.0, 0.7, 3.1}) {
    const Eigen::VectorXd h = hermite_functions(3, x);
    const double g = std::pow(M_PI, -0.25) * std::exp(-x * x / 2);
    EXPECT_NEAR(h(0), g, 1e-14);
    EXPECT_NEAR(h(1), std::sqrt(2.0) * x * g, 1e-14);
    EXPECT_NEAR(h(2), (2 * x * x - 1) / std::sqrt(2.0) * g, 1e-14);
  }
  const int n = 12;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  const double dx = 0.01;
  for (double x = -12; x <= 12; x += dx) {
    const Eigen::VectorXd h = hermite_functions(n, x);
    gram += h * h.transpose() * dx;
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(LogicalStates, ParseAndPrint) {
  for (const char* s : {"0", "1", "plus", "minus", "i", "-i"}) {
    EXPECT_EQ(to_string(parse_logical_state(s)), s);
  }
  EXPECT_THROW(parse_logical_state("2"), Error);
}

}  // namespace
}  // namespace gridsim
