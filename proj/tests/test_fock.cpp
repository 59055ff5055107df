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
#include <unsupported/Eigen/MatrixFunctions>

#include "gridsim/error.hpp"
#include "gridsim/fock.hpp"

namespace gridsim {
namespace {

const cplx I(0.0, 1.0);

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

CVec coherent(cplx alpha, int dim) {
  CVec v(dim);
  double log_fact = 0.0;
  for (int n = 0; n < dim; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    v(n) = std::exp(-std::norm(alpha) / 2 - 0.5 * log_fact) * std::pow(alpha, n);
  }
  return v;
}

CMat sigma_x() {
  CMat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

// Reference exponential by a plain Taylor series on a scaled-down matrix.
CMat taylor_expm(const CMat& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm / std::pow(2.0, s) > 0.25) ++s;
  const CMat b = a / std::pow(2.0, s);
  CMat term = CMat::Identity(a.rows(), a.cols());
  CMat sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

TEST(SpaceLayout, DimensionsAndStrides) {
  const SpaceLayout l = SpaceLayout::with_aux({5, 4});
  EXPECT_EQ(l.total_dim(), 40);
  EXPECT_EQ(l.mode_count(), 2);
  EXPECT_EQ(l.aux_index(), 2);
  EXPECT_EQ(l.outer_dim(1), 5);
  EXPECT_EQ(l.inner_dim(1), 2);
  EXPECT_EQ(l.oscillator_part(), SpaceLayout::oscillators({5, 4}));
  EXPECT_THROW(SpaceLayout({0}), Error);
  EXPECT_THROW(l.dim(3), Error);
}

TEST(QuantumState, BasisIndexIsKroneckerOrder) {
  const SpaceLayout l = SpaceLayout::with_aux({3});
  const QuantumState s = QuantumState::basis(l, {2, 1});
  EXPECT_EQ(s.amplitudes()(5), cplx(1.0));
  EXPECT_TRUE(s.is_normalized());
  QuantumState z(l, CVec::Zero(6));
  EXPECT_THROW(z.normalize(), Error);
  EXPECT_THROW(QuantumState(l, CVec::Zero(5)), Error);
}

TEST(Operators, QuadratureCommutatorAwayFromEdge) {
  const int d = 30;
  const auto [q, p] = quadratures(d);
  const CMat c = q.entries() * p.entries() - p.entries() * q.entries();
  const CMat block = c.topLeftCorner(d - 2, d - 2);
  EXPECT_LT(max_abs(block - I * CMat::Identity(d - 2, d - 2)), 1e-12);
  EXPECT_NEAR(((q.entries() * q.entries())(0, 0)).real(), 0.5, 1e-14);
  EXPECT_NEAR(q.entries()(1, 0).real(), 1.0 / std::sqrt(2.0), 1e-14);
}

TEST(Displacement, ZeroIsIdentity) {
  EXPECT_LT(max_abs(displacement(0.0, 20).entries() - CMat::Identity(20, 20)), 1e-14);
}

TEST(Displacement, CoherentOverlapClosedForm) {
  for (int d : {30, 60, 80}) {
    const CMat m = displacement(1.0, d).entries();
    EXPECT_NEAR(std::abs(m(0, 0)), std::exp(-0.5), 1e-6) << d;
  }
  const cplx a(0.8, -1.1);
  const CMat m = displacement(a, 60).entries();
  EXPECT_LT((m.col(0) - coherent(a, 60)).norm(), 1e-8);
}

TEST(Displacement, InverseAndUnitarity) {
  const cplx a(0.7, 0.3);
  const CMat d = displacement(a, 60).entries();
  EXPECT_LT(max_abs(d * displacement(-a, 60).entries() - CMat::Identity(60, 60)), 1e-10);
  for (cplx b : {cplx(3.0, 0.0), cplx(0.0, -3.0), cplx(2.0, 2.0)}) {
    const CMat u = displacement(b, 40).entries();
    EXPECT_LT(max_abs(u.adjoint() * u - CMat::Identity(40, 40)), 1e-9);
  }
}

TEST(Displacement, CompositionLawOnLowLevels) {
  // D(a) D(b) = exp(i Im(a b*)) D(a + b); truncation only touches the top levels.
  const int d = 60;
  const int keep = 20;
  const std::vector<std::pair<cplx, cplx>> pairs = {
      {0.5, cplx(0, 0.5)}, {cplx(1.2, -0.4), cplx(-0.3, 1.1)}, {2.0, cplx(0, 2.0)}};
  for (const auto& [a, b] : pairs) {
    const CMat lhs = displacement(a, d).entries() * displacement(b, d).entries();
    const CMat rhs = std::exp(I * std::imag(a * std::conj(b))) * displacement(a + b, d).entries();
    const double dd = max_abs((lhs - rhs).topLeftCorner(keep, keep));
    EXPECT_LT(dd, 1e-8) << a << " " << b;
  }
}

TEST(Displacement, TruncationConvergence) {
  const cplx a(1.5, 1.0);
  double prev = 1.0;
  for (int n : {10, 20, 30, 40, 50, 60}) {
    const CVec small = displacement(a, n).entries().col(0);
    CVec padded = CVec::Zero(2 * n);
    padded.head(n) = small;
    const double err = (padded - displacement(a, 2 * n).entries().col(0)).norm();
    EXPECT_LE(err, prev + 1e-13);  // monotone down to the roundoff floor
    prev = err;
    if (n >= 8 * std::norm(a) + 20) EXPECT_LT(err, 1e-8);
  }
}

TEST(Displacement, KernelMatchesMatrixAndExponential) {
  const int d = 40;
  const DisplacementKernel k(d);
  const cplx a(-0.9, 1.3);
  const OperatorMatrix gen(SpaceLayout({d}),
                           a * annihilation(d).entries().adjoint() -
                               std::conj(a) * annihilation(d).entries());
  const CMat ref = matrix_exponential(gen, 1.0).entries();
  EXPECT_LT(max_abs(k.matrix(a) - ref), 1e-10);
  EXPECT_LT(max_abs(displacement(a, d).entries() - ref), 1e-10);
  CVec v = CVec::Random(d);
  EXPECT_LT((k.apply(a, v) - ref * v).norm(), 1e-10);
}

TEST(Expm, SpecialCases) {
  const CMat z = CMat::Zero(6, 6);
  EXPECT_LT(max_abs(expm(z) - CMat::Identity(6, 6)), 1e-15);
  EXPECT_LT(max_abs(expm(I * (M_PI / 2) * sigma_x()) - I * sigma_x()), 1e-12);
  Eigen::VectorXcd diag(4);
  diag << cplx(1, 2), cplx(-3, 0.5), cplx(0.1, -7), cplx(2.5, 0);
  const CMat e = expm(CMat(diag.asDiagonal()));
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(e(i, i) - std::exp(diag(i))), 1e-12 * std::abs(e(i, i)) + 1e-14);
}

TEST(Expm, AgreesWithIndependentRoutes) {
  std::srand(7);
  for (double scale : {0.1, 1.0, 5.0, 30.0}) {
    const CMat a = CMat::Random(12, 12) * scale;
    const CMat ours = expm(a);
    const CMat eig = a.exp();
    const CMat tay = taylor_expm(a);
    const double n = max_abs(eig);
    EXPECT_LT(max_abs(ours - eig) / n, 1e-10) << scale;
    EXPECT_LT(max_abs(ours - tay) / n, 1e-10) << scale;
  }
}

TEST(Expm, RejectsNonFinite) {
  CMat a = CMat::Identity(3, 3);
  a(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(a), Error);
  EXPECT_THROW(expm(CMat::Identity(3, 3) * 1e6), Error);
}

TEST(Embed, IdentityAndFlip) {
  const SpaceLayout l = SpaceLayout::with_aux({4});
  EXPECT_LT(max_abs(embed(OperatorMatrix::identity(SpaceLayout({4})), 0, l).entries() -
                    CMat::Identity(8, 8)),
            1e-15);
  const OperatorMatrix x = embed(OperatorMatrix(SpaceLayout({2}), sigma_x()), 1, l);
  const QuantumState out = x.apply(QuantumState::basis(l, {0, 0}));
  EXPECT_EQ(out.amplitudes()(1), cplx(1.0));
  EXPECT_THROW(embed(OperatorMatrix::identity(SpaceLayout({3})), 0, l), Error);
  EXPECT_THROW(embed(OperatorMatrix::identity(SpaceLayout({4})), 2, l), Error);
}

TEST(Embed, DisjointSupportsCommute) {
  const SpaceLayout l = SpaceLayout::oscillators({3, 4});
  const OperatorMatrix a = embed(OperatorMatrix(SpaceLayout({3}), CMat::Random(3, 3)), 0, l);
  const OperatorMatrix b = embed(OperatorMatrix(SpaceLayout({4}), CMat::Random(4, 4)), 1, l);
  EXPECT_LT(max_abs((a * b).entries() - (b * a).entries()), 1e-12);
}

TEST(ApplyLocal, MatchesEmbedAndConditional) {
  const SpaceLayout l = SpaceLayout::with_aux({3, 4});
  const CMat a = CMat::Random(4, 4);
  const CVec v = CVec::Random(l.total_dim());
  CVec w = v;
  apply_local(w, l, 1, a);
  EXPECT_LT((w - embed(OperatorMatrix(SpaceLayout({4}), a), 1, l).entries() * v).norm(), 1e-12);
  // Conditional on aux = 1: embed(A) (x) |e><e| + I (x) |g><g|.
  CVec c = v;
  apply_local(c, l, 0, CMat::Random(3, 3) * 0.0 + CMat::Identity(3, 3) * 2.0, 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    EXPECT_LT(std::abs(c(i) - (i % 2 ? 2.0 : 1.0) * v(i)), 1e-14);
  }
}

TEST(Expectation, NumberAndCoherent) {
  const QuantumState vac = QuantumState::basis(SpaceLayout({10}), {0});
  EXPECT_NEAR(expectation(vac, number_operator(10)).real(), 0.0, 1e-15);
  QuantumState coh(SpaceLayout({40}), coherent(1.0, 40));
  EXPECT_NEAR(expectation(coh, number_operator(40)).real(), 1.0, 1e-6);
  CVec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const QuantumState p(SpaceLayout({2}), plus);
  EXPECT_NEAR(expectation(p, OperatorMatrix(SpaceLayout({2}), sigma_x())).real(), 1.0, 1e-15);
  EXPECT_THROW(expectation(p, number_operator(3)), Error);
}

TEST(PartialTrace, ProductAndBell) {
  const SpaceLayout l = SpaceLayout::oscillators({3, 2});
  CVec a = CVec::Random(3).normalized();
  CVec b = CVec::Random(2).normalized();
  const QuantumState s = QuantumState::product(l, {a, b});
  const DensityMatrix rho = DensityMatrix::from_state(s);
  const DensityMatrix ra = partial_trace(rho, {0});
  EXPECT_LT(max_abs(ra.entries() - a * a.adjoint()), 1e-12);
  EXPECT_NEAR(std::abs(ra.trace() - rho.trace()), 0.0, 1e-12);

  const SpaceLayout q2 = SpaceLayout::oscillators({2, 2});
  CVec bell = CVec::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const DensityMatrix rb = DensityMatrix::from_state(QuantumState(q2, bell));
  for (int keep : {0, 1}) {
    EXPECT_LT(max_abs(partial_trace(rb, {keep}).entries() - 0.5 * CMat::Identity(2, 2)), 1e-15);
  }
  EXPECT_THROW(partial_trace(rb, {}), Error);
  EXPECT_THROW(partial_trace(rb, {2}), Error);
}

TEST(DensityMatrix, ValidateRejectsNonPhysical) {
  CMat m = CMat::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(SpaceLayout({2}), m).validate(), Error);
  m << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix(SpaceLayout({2}), m).validate(), Error);
  m << 0.5, 0, 0, 0.5;
  EXPECT_NO_THROW(DensityMatrix(SpaceLayout({2}), m).validate());
}

TEST(TailMass, WarnsNearTruncation) {
  const QuantumState low(SpaceLayout({20}), coherent(0.5, 20));
  EXPECT_TRUE(truncation_warnings(tail_mass(low)).empty());
  CVec v = coherent(3.5, 20);
  const QuantumState high(SpaceLayout({20}), v.normalized());
  EXPECT_EQ(truncation_warnings(tail_mass(high)).size(), 1u);
}

}  // namespace
}  // namespace gridsim
