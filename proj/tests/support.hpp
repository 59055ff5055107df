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

#ifndef GRIDSIM_TESTS_SUPPORT_HPP_
#define GRIDSIM_TESTS_SUPPORT_HPP_

#include <cmath>

#include "gridsim/codes.hpp"
#include "gridsim/fock.hpp"

namespace gridsim::testing {

// Coherent-state amplitudes from the closed form e^{-|a|^2/2} a^n / sqrt(n!).
inline CVec coherent(cplx alpha, int dim) {
  CVec v(dim);
  double log_fact = 0.0;
  for (int n = 0; n < dim; ++n) {
    if (n > 0) log_fact += std::log(static_cast<double>(n));
    v(n) = std::exp(-std::norm(alpha) / 2 - 0.5 * log_fact) * std::pow(alpha, n);
  }
  return v;
}

// Ideal recovery by projection onto the code space: after D(alpha) acts on
// `which`, the weight left on `which` over the total code-space weight.
inline double projection_recovery_fidelity(const CodeWords& cw, LogicalState which,
                                           LogicalState partner, cplx alpha) {
  const DisplacementKernel k(cw.ket_zero.layout().dim(0));
  const CVec v = k.apply(alpha, cw.logical(which).amplitudes());
  const double a = std::norm(cw.logical(which).amplitudes().dot(v));
  const double b = std::norm(cw.logical(partner).amplitudes().dot(v));
  return a / (a + b);
}

}  // namespace gridsim::testing

#endif  // GRIDSIM_TESTS_SUPPORT_HPP_
