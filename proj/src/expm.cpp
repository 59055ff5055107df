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

#include <array>
#include <cmath>

#include "gridsim/error.hpp"
#include "gridsim/fock.hpp"

namespace gridsim {

namespace {

// Higham (2005) degree-13 coefficients and the matching 1-norm threshold.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const CMat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

CMat expm(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::kInvalidDimension, "expm: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) {
    throw Error(ErrorKind::kNumericRange, "expm: non-finite input");
  }
  const double norm = one_norm(a);
  int s = 0;
  if (norm > kTheta13) {
    s = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    if (s > 1000) {
      throw Error(ErrorKind::kNumericRange, "expm: input norm too large");
    }
  }
  const CMat x = a / std::ldexp(1.0, s);
  const CMat id = CMat::Identity(n, n);
  const CMat x2 = x * x;
  const CMat x4 = x2 * x2;
  const CMat x6 = x4 * x2;
  const auto& b = kPade13;
  CMat u_inner = b[13] * x6 + b[11] * x4 + b[9] * x2;
  CMat u = x * (x6 * u_inner + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  CMat v_inner = b[12] * x6 + b[10] * x4 + b[8] * x2;
  CMat v = x6 * v_inner + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;
  CMat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  if (!r.allFinite()) {
    throw Error(ErrorKind::kNumericRange, "expm: result overflowed");
  }
  return r;
}

OperatorMatrix matrix_exponential(const OperatorMatrix& gen, cplx scale) {
  return OperatorMatrix(gen.layout(), expm(scale * gen.entries()));
}

}  // namespace gridsim
