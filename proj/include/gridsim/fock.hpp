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

#ifndef GRIDSIM_FOCK_HPP_
#define GRIDSIM_FOCK_HPP_

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace gridsim {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Ordered subsystem dimensions. Subsystem 0 is the most significant index
// (Kronecker order). When present, the auxiliary is the last subsystem.
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<int> dims, bool has_aux = false);

  static SpaceLayout oscillators(std::vector<int> mode_dims);
  static SpaceLayout with_aux(std::vector<int> mode_dims);

  const std::vector<int>& dims() const { return dims_; }
  int subsystem_count() const { return static_cast<int>(dims_.size()); }
  int mode_count() const { return subsystem_count() - (has_aux_ ? 1 : 0); }
  int dim(int k) const;
  Eigen::Index total_dim() const { return total_; }
  bool has_aux() const { return has_aux_; }
  int aux_index() const;
  // Product of dimensions strictly before / after subsystem k.
  Eigen::Index outer_dim(int k) const;
  Eigen::Index inner_dim(int k) const;
  // Layout of the oscillator modes only.
  SpaceLayout oscillator_part() const;

  bool operator==(const SpaceLayout& o) const {
    return dims_ == o.dims_ && has_aux_ == o.has_aux_;
  }
  bool operator!=(const SpaceLayout& o) const { return !(*this == o); }
  std::string describe() const;

 private:
  std::vector<int> dims_;
  bool has_aux_ = false;
  Eigen::Index total_ = 1;
};

class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(SpaceLayout layout, CVec amplitudes);

  // Product basis state |i_0, i_1, ...>.
  static QuantumState basis(const SpaceLayout& layout, const std::vector<int>& indices);
  // Kronecker product of per-subsystem kets, in layout order.
  static QuantumState product(const SpaceLayout& layout, const std::vector<CVec>& factors);

  const SpaceLayout& layout() const { return layout_; }
  const CVec& amplitudes() const { return amps_; }
  CVec& amplitudes() { return amps_; }
  bool is_normalized() const { return normalized_; }
  double norm() const { return amps_.norm(); }
  // Renormalizes; throws NumericRange on a zero vector.
  void normalize();
  void mark_unnormalized() { normalized_ = false; }

 private:
  SpaceLayout layout_;
  CVec amps_;
  bool normalized_ = false;
};

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(SpaceLayout layout, CMat entries);
  static OperatorMatrix identity(const SpaceLayout& layout);

  const SpaceLayout& layout() const { return layout_; }
  const CMat& entries() const { return m_; }
  CMat& entries() { return m_; }

  OperatorMatrix operator*(const OperatorMatrix& o) const;
  OperatorMatrix adjoint() const;
  QuantumState apply(const QuantumState& s) const;

 private:
  SpaceLayout layout_;
  CMat m_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(SpaceLayout layout, CMat entries);
  static DensityMatrix from_state(const QuantumState& s);

  const SpaceLayout& layout() const { return layout_; }
  const CMat& entries() const { return m_; }
  CMat& entries() { return m_; }
  cplx trace() const { return m_.trace(); }
  // Hermiticity, unit trace and positivity within tol; throws NumericRange.
  void validate(double tol = 1e-10) const;

 private:
  SpaceLayout layout_;
  CMat m_;
};

// Single-mode ladder and quadrature operators, q = (a + a^dag)/sqrt2,
// p = i(a^dag - a)/sqrt2, so exp(iuq) = D(iu/sqrt2) and exp(-ivp) = D(v/sqrt2).
OperatorMatrix annihilation(int dim);
OperatorMatrix number_operator(int dim);
std::pair<OperatorMatrix, OperatorMatrix> quadratures(int dim);

// exp(alpha a^dag - alpha^* a) on the truncated space, built spectrally.
OperatorMatrix displacement(cplx alpha, int dim);

// Caches the eigensystem of the truncated quadrature generator so that
// displacements (as matrices or applied to vectors) cost O(N^2) after setup.
class DisplacementKernel {
 public:
  explicit DisplacementKernel(int dim);
  int dim() const { return dim_; }
  CMat matrix(cplx alpha) const;
  // out = D(alpha) v; O(N^2).
  CVec apply(cplx alpha, const CVec& v) const;

 private:
  int dim_;
  Eigen::MatrixXd w_;     // eigenvectors of a + a^dag
  Eigen::VectorXd lam_;   // eigenvalues of a + a^dag
};

OperatorMatrix embed(const OperatorMatrix& op, int subsystem_index, const SpaceLayout& layout);
CMat kron(const CMat& a, const CMat& b);

// exp(scale * gen); Pade-13 scaling and squaring.
OperatorMatrix matrix_exponential(const OperatorMatrix& gen, cplx scale);
CMat expm(const CMat& a);

cplx expectation(const QuantumState& state, const OperatorMatrix& op);
cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op);

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
// Oscillator-part density matrix of a state vector (auxiliary traced out).
DensityMatrix reduced_oscillators(const QuantumState& s);

// In-place application of a local matrix on subsystem k of a state vector.
// With aux_value >= 0 the matrix acts only on the component whose auxiliary
// index equals aux_value (the layout must carry the auxiliary).
void apply_local(CVec& psi, const SpaceLayout& layout, int k, const CMat& a, int aux_value = -1);
// Same, applied to every column of a matrix (used to build full operators).
void apply_local_columns(CMat& m, const SpaceLayout& layout, int k, const CMat& a,
                         int aux_value = -1);

// Tail-mass diagnostics: probability in the top 10% of Fock levels of each
// oscillator mode. Returns one message per mode exceeding the threshold.
std::vector<double> tail_mass(const QuantumState& s);
std::vector<double> tail_mass(const DensityMatrix& rho);
std::vector<std::string> truncation_warnings(const std::vector<double>& tails,
                                             double threshold = 1e-6);

}  // namespace gridsim

#endif  // GRIDSIM_FOCK_HPP_
