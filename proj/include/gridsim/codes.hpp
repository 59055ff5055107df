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

#ifndef GRIDSIM_CODES_HPP_
#define GRIDSIM_CODES_HPP_

#include <string>
#include <vector>

#include "gridsim/fock.hpp"
#include "json.hpp"

namespace gridsim {

// Multimode displacement D(alpha_1) x ... x D(alpha_m), stored as its
// per-mode amplitudes.
struct PhaseSpaceVector {
  std::vector<cplx> alpha;
  std::string label;

  int size() const { return static_cast<int>(alpha.size()); }
  PhaseSpaceVector scaled(cplx c) const;
  double norm() const;
};

// Commutation phase: D(a) D(b) = exp(i * phase) D(b) D(a), phase = 2 Im(sum a_k b_k^*).
double symplectic_phase(const PhaseSpaceVector& a, const PhaseSpaceVector& b);
// Angle between two vectors viewed as real 2m-dimensional phase-space vectors.
double phase_space_angle(const PhaseSpaceVector& a, const PhaseSpaceVector& b);

struct CodeSpec {
  std::string name;
  int mode_count = 1;
  double l = 0.0;
  double delta = 0.0;
  std::vector<PhaseSpaceVector> stabilizers;
  PhaseSpaceVector logical_x;
  PhaseSpaceVector logical_z;

  // Checks vector lengths and the commutation structure; throws InvalidArgument.
  void validate() const;
  int stabilizer_index(const std::string& label) const;
};

double lattice_constant();  // 2 sqrt(pi)

CodeSpec gkp_square(double delta);
CodeSpec tesseract(double delta);

nlohmann::json code_to_json(const CodeSpec& code);
CodeSpec code_from_json(const nlohmann::json& j);

// Per-mode factors of E_D D(vec) E_D^{-1}, E_D = exp(-D^2 n).
std::vector<CMat> dressed_factors(const PhaseSpaceVector& vec, double delta,
                                  const std::vector<int>& mode_dims);
// Full operator on `layout` (identity on the auxiliary if present).
OperatorMatrix dress_finite_energy(const PhaseSpaceVector& vec, double delta,
                                   const SpaceLayout& layout);

// <psi| (x_k F_k) |psi> and Tr(rho x_k F_k) for per-mode factors applied
// locally; the auxiliary, if any, is traced over.
cplx local_expectation(const QuantumState& s, const std::vector<CMat>& factors);
cplx local_expectation(const DensityMatrix& rho, const std::vector<CMat>& factors);

enum class LogicalState { kZero, kOne, kPlus, kMinus, kPlusI, kMinusI };
LogicalState parse_logical_state(const std::string& s);
std::string to_string(LogicalState s);

struct CodeWords {
  QuantumState ket_zero;
  QuantumState ket_one;
  // Min over both codewords of Re<S_D> per stabilizer, in stabilizer order.
  std::vector<double> achieved;
  std::vector<std::string> warnings;

  QuantumState logical(LogicalState which) const;
};

// Dressed lattice superpositions E_D sum_k |x_k>; see README for the method.
CodeWords construct_codewords(const CodeSpec& code, const SpaceLayout& layout,
                              double floor = 0.99);
double mean_photon_estimate(double delta);
CodeWords binomial_11_codewords(int dim);

// Hermite functions psi_0..psi_{n-1} at x.
Eigen::VectorXd hermite_functions(int n, double x);

}  // namespace gridsim

#endif  // GRIDSIM_CODES_HPP_
