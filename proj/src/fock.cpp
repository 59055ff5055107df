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

#include "gridsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridsim/error.hpp"

namespace gridsim {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kLayoutMismatch: return "layout-mismatch";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kNumericRange: return "numeric-range";
    case ErrorKind::kConstructionQuality: return "construction-quality";
    case ErrorKind::kMeasurementUnderflow: return "measurement-underflow";
    case ErrorKind::kFitFailure: return "fit-failure";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

// ---------------------------------------------------------------- layout

SpaceLayout::SpaceLayout(std::vector<int> dims, bool has_aux)
    : dims_(std::move(dims)), has_aux_(has_aux) {
  if (dims_.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "layout needs at least one subsystem");
  }
  for (int d : dims_) {
    if (d < 2) {
      throw Error(ErrorKind::kInvalidDimension,
                  "subsystem dimension must be >= 2, got " + std::to_string(d));
    }
    total_ *= d;
  }
  if (has_aux_ && dims_.back() != 2) {
    throw Error(ErrorKind::kInvalidDimension, "auxiliary subsystem must have dimension 2");
  }
}

SpaceLayout SpaceLayout::oscillators(std::vector<int> mode_dims) {
  return SpaceLayout(std::move(mode_dims), false);
}

SpaceLayout SpaceLayout::with_aux(std::vector<int> mode_dims) {
  mode_dims.push_back(2);
  return SpaceLayout(std::move(mode_dims), true);
}

int SpaceLayout::dim(int k) const {
  if (k < 0 || k >= subsystem_count()) {
    throw Error(ErrorKind::kIndexOutOfRange, "subsystem index " + std::to_string(k) +
                                                 " out of range for " + describe());
  }
  return dims_[k];
}

int SpaceLayout::aux_index() const {
  if (!has_aux_) throw Error(ErrorKind::kLayoutMismatch, "layout has no auxiliary");
  return subsystem_count() - 1;
}

Eigen::Index SpaceLayout::outer_dim(int k) const {
  dim(k);
  Eigen::Index p = 1;
  for (int i = 0; i < k; ++i) p *= dims_[i];
  return p;
}

Eigen::Index SpaceLayout::inner_dim(int k) const {
  dim(k);
  Eigen::Index p = 1;
  for (int i = k + 1; i < subsystem_count(); ++i) p *= dims_[i];
  return p;
}

SpaceLayout SpaceLayout::oscillator_part() const {
  std::vector<int> d(dims_.begin(), dims_.begin() + mode_count());
  return SpaceLayout(d, false);
}

std::string SpaceLayout::describe() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < dims_.size(); ++i) os << (i ? "x" : "") << dims_[i];
  os << (has_aux_ ? " aux]" : "]");
  return os.str();
}

// ---------------------------------------------------------------- containers

QuantumState::QuantumState(SpaceLayout layout, CVec amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.total_dim()) {
    throw Error(ErrorKind::kLayoutMismatch, "amplitude length does not match layout");
  }
  normalized_ = std::abs(amps_.norm() - 1.0) < 1e-12;
}

QuantumState QuantumState::basis(const SpaceLayout& layout, const std::vector<int>& indices) {
  if (static_cast<int>(indices.size()) != layout.subsystem_count()) {
    throw Error(ErrorKind::kLayoutMismatch, "basis index count does not match layout");
  }
  Eigen::Index idx = 0;
  for (int k = 0; k < layout.subsystem_count(); ++k) {
    if (indices[k] < 0 || indices[k] >= layout.dim(k)) {
      throw Error(ErrorKind::kIndexOutOfRange, "basis index out of range");
    }
    idx = idx * layout.dim(k) + indices[k];
  }
  CVec v = CVec::Zero(layout.total_dim());
  v(idx) = 1.0;
  return QuantumState(layout, v);
}

QuantumState QuantumState::product(const SpaceLayout& layout, const std::vector<CVec>& factors) {
  if (static_cast<int>(factors.size()) != layout.subsystem_count()) {
    throw Error(ErrorKind::kLayoutMismatch, "factor count does not match layout");
  }
  CVec v = CVec::Ones(1);
  for (int k = 0; k < layout.subsystem_count(); ++k) {
    if (factors[k].size() != layout.dim(k)) {
      throw Error(ErrorKind::kLayoutMismatch, "factor dimension does not match layout");
    }
    CVec next(v.size() * factors[k].size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next.segment(i * factors[k].size(), factors[k].size()) = v(i) * factors[k];
    }
    v = std::move(next);
  }
  return QuantumState(layout, v);
}

void QuantumState::normalize() {
  const double n = amps_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::kNumericRange, "cannot normalize a zero or non-finite state");
  }
  amps_ /= n;
  normalized_ = true;
}

OperatorMatrix::OperatorMatrix(SpaceLayout layout, CMat entries)
    : layout_(std::move(layout)), m_(std::move(entries)) {
  if (m_.rows() != layout_.total_dim() || m_.cols() != layout_.total_dim()) {
    throw Error(ErrorKind::kLayoutMismatch, "operator side does not match layout");
  }
}

OperatorMatrix OperatorMatrix::identity(const SpaceLayout& layout) {
  return OperatorMatrix(layout, CMat::Identity(layout.total_dim(), layout.total_dim()));
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
  if (layout_ != o.layout_) throw Error(ErrorKind::kLayoutMismatch, "operator product layouts differ");
  return OperatorMatrix(layout_, m_ * o.m_);
}

OperatorMatrix OperatorMatrix::adjoint() const { return OperatorMatrix(layout_, m_.adjoint()); }

QuantumState OperatorMatrix::apply(const QuantumState& s) const {
  if (layout_ != s.layout()) throw Error(ErrorKind::kLayoutMismatch, "operator/state layouts differ");
  return QuantumState(layout_, m_ * s.amplitudes());
}

DensityMatrix::DensityMatrix(SpaceLayout layout, CMat entries)
    : layout_(std::move(layout)), m_(std::move(entries)) {
  if (m_.rows() != layout_.total_dim() || m_.cols() != layout_.total_dim()) {
    throw Error(ErrorKind::kLayoutMismatch, "density matrix side does not match layout");
  }
}

DensityMatrix DensityMatrix::from_state(const QuantumState& s) {
  const CVec& v = s.amplitudes();
  return DensityMatrix(s.layout(), v * v.adjoint());
}

void DensityMatrix::validate(double tol) const {
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::kNumericRange, "density matrix is not Hermitian");
  }
  if (std::abs(m_.trace() - cplx(1.0)) > tol) {
    throw Error(ErrorKind::kNumericRange, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorKind::kNumericRange, "density matrix has a negative eigenvalue");
  }
}

// ---------------------------------------------------------------- operators

OperatorMatrix annihilation(int dim) {
  SpaceLayout l = SpaceLayout::oscillators({dim});
  CMat a = CMat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return OperatorMatrix(l, a);
}

OperatorMatrix number_operator(int dim) {
  SpaceLayout l = SpaceLayout::oscillators({dim});
  CMat n = CMat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) n(i, i) = static_cast<double>(i);
  return OperatorMatrix(l, n);
}

std::pair<OperatorMatrix, OperatorMatrix> quadratures(int dim) {
  const OperatorMatrix a = annihilation(dim);
  const CMat& m = a.entries();
  const double r = 1.0 / std::sqrt(2.0);
  CMat q = r * (m + m.adjoint());
  CMat p = cplx(0.0, r) * (m.adjoint() - m);
  return {OperatorMatrix(a.layout(), q), OperatorMatrix(a.layout(), p)};
}

DisplacementKernel::DisplacementKernel(int dim) : dim_(dim) {
  if (dim < 2) throw Error(ErrorKind::kInvalidDimension, "displacement dimension must be >= 2");
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    x(n - 1, n) = std::sqrt(static_cast<double>(n));
    x(n, n - 1) = x(n - 1, n);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  w_ = es.eigenvectors();
  lam_ = es.eigenvalues();
}

// D(r e^{i theta}) = R W diag(e^{-i r lam}) W^T R^dag, with R = e^{i phi n},
// phi = theta + pi/2 and W, lam the eigensystem of a + a^dag.
CMat DisplacementKernel::matrix(cplx alpha) const {
  if (alpha == cplx(0.0)) return CMat::Identity(dim_, dim_);
  const double r = std::abs(alpha);
  const double phi = std::arg(alpha) + M_PI / 2;
  CVec ph(dim_);
  for (int k = 0; k < dim_; ++k) ph(k) = std::polar(1.0, -r * lam_(k));
  CMat d = w_.cast<cplx>() * ph.asDiagonal() * w_.transpose().cast<cplx>();
  for (int n = 0; n < dim_; ++n) {
    for (int m = 0; m < dim_; ++m) d(m, n) *= std::polar(1.0, phi * (m - n));
  }
  return d;
}

CVec DisplacementKernel::apply(cplx alpha, const CVec& v) const {
  if (v.size() != dim_) throw Error(ErrorKind::kLayoutMismatch, "vector length mismatch");
  if (alpha == cplx(0.0)) return v;
  const double r = std::abs(alpha);
  const double phi = std::arg(alpha) + M_PI / 2;
  CVec u(dim_);
  for (int n = 0; n < dim_; ++n) u(n) = v(n) * std::polar(1.0, -phi * n);
  Eigen::VectorXd tr = w_.transpose() * u.real();
  Eigen::VectorXd ti = w_.transpose() * u.imag();
  CVec t(dim_);
  for (int k = 0; k < dim_; ++k) t(k) = cplx(tr(k), ti(k)) * std::polar(1.0, -r * lam_(k));
  Eigen::VectorXd yr = w_ * t.real();
  Eigen::VectorXd yi = w_ * t.imag();
  CVec out(dim_);
  for (int n = 0; n < dim_; ++n) out(n) = cplx(yr(n), yi(n)) * std::polar(1.0, phi * n);
  return out;
}

OperatorMatrix displacement(cplx alpha, int dim) {
  DisplacementKernel k(dim);
  return OperatorMatrix(SpaceLayout::oscillators({dim}), k.matrix(alpha));
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

OperatorMatrix embed(const OperatorMatrix& op, int subsystem_index, const SpaceLayout& layout) {
  const int d = layout.dim(subsystem_index);
  if (op.entries().rows() != d) {
    throw Error(ErrorKind::kLayoutMismatch,
                "operator side " + std::to_string(op.entries().rows()) +
                    " does not match subsystem dimension " + std::to_string(d));
  }
  const Eigen::Index outer = layout.outer_dim(subsystem_index);
  const Eigen::Index inner = layout.inner_dim(subsystem_index);
  CMat m = kron(kron(CMat::Identity(outer, outer), op.entries()), CMat::Identity(inner, inner));
  return OperatorMatrix(layout, m);
}

cplx expectation(const QuantumState& state, const OperatorMatrix& op) {
  if (state.layout() != op.layout()) {
    throw Error(ErrorKind::kLayoutMismatch, "expectation: layouts differ");
  }
  return state.amplitudes().dot(op.entries() * state.amplitudes());
}

cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (rho.layout() != op.layout()) {
    throw Error(ErrorKind::kLayoutMismatch, "expectation: layouts differ");
  }
  return (rho.entries().transpose().cwiseProduct(op.entries())).sum();
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const SpaceLayout& l = rho.layout();
  const int n = l.subsystem_count();
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw Error(ErrorKind::kInvalidArgument, "partial_trace: duplicate subsystem index");
  }
  std::vector<bool> is_kept(n, false);
  for (int k : kept) {
    if (k < 0 || k >= n) throw Error(ErrorKind::kIndexOutOfRange, "partial_trace: bad index");
    is_kept[k] = true;
  }
  if (kept.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "partial_trace: keep at least one subsystem");
  }
  std::vector<int> kdims, tdims;
  for (int k = 0; k < n; ++k) (is_kept[k] ? kdims : tdims).push_back(l.dims()[k]);
  Eigen::Index kd = 1, td = 1;
  for (int d : kdims) kd *= d;
  for (int d : tdims) td *= d;
  // full index for (kept multi-index, traced multi-index).
  std::vector<Eigen::Index> table(kd * td);
  std::vector<int> digits(n);
  for (Eigen::Index full = 0; full < l.total_dim(); ++full) {
    Eigen::Index rem = full;
    for (int k = n - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rem % l.dims()[k]);
      rem /= l.dims()[k];
    }
    Eigen::Index ki = 0, ti = 0;
    for (int k = 0; k < n; ++k) {
      if (is_kept[k]) ki = ki * l.dims()[k] + digits[k];
      else ti = ti * l.dims()[k] + digits[k];
    }
    table[ki * td + ti] = full;
  }
  CMat out = CMat::Zero(kd, kd);
  const CMat& m = rho.entries();
  for (Eigen::Index b = 0; b < kd; ++b) {
    for (Eigen::Index a = 0; a < kd; ++a) {
      cplx s = 0.0;
      for (Eigen::Index t = 0; t < td; ++t) s += m(table[a * td + t], table[b * td + t]);
      out(a, b) = s;
    }
  }
  const bool aux_kept = l.has_aux() && is_kept[n - 1];
  return DensityMatrix(SpaceLayout(kdims, aux_kept), out);
}

DensityMatrix reduced_oscillators(const QuantumState& s) {
  const SpaceLayout& l = s.layout();
  if (!l.has_aux()) return DensityMatrix::from_state(s);
  const Eigen::Index osc = l.total_dim() / 2;
  Eigen::Map<const CMat, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>> m(
      s.amplitudes().data(), osc, 2, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(1, 2));
  return DensityMatrix(l.oscillator_part(), m * m.adjoint());
}

// ---------------------------------------------------------------- local kernels

namespace {

using StridedMap = Eigen::Map<CMat, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
using Strides = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;

// Index of basis element (o, j, i) is o*d*inner + j*inner + i. Each slice is
// viewed as a matrix with the subsystem index as column and updated as M A^T.
void apply_local_raw(cplx* data, const SpaceLayout& layout, int k, const CMat& a, int aux_value) {
  const Eigen::Index d = layout.dim(k);
  if (a.rows() != d || a.cols() != d) {
    throw Error(ErrorKind::kLayoutMismatch, "local operator does not match subsystem dimension");
  }
  const Eigen::Index outer = layout.outer_dim(k);
  const Eigen::Index inner = layout.inner_dim(k);
  Eigen::Index step = 1, offset = 0, rows = inner;
  if (aux_value >= 0) {
    if (!layout.has_aux() || k == layout.aux_index() || aux_value > 1) {
      throw Error(ErrorKind::kLayoutMismatch, "conditional operator needs an oscillator and aux");
    }
    step = 2;
    offset = aux_value;
    rows = inner / 2;
  }
  const CMat at = a.transpose();
  CMat tmp;
  if (outer <= rows) {
    for (Eigen::Index o = 0; o < outer; ++o) {
      StridedMap m(data + o * d * inner + offset, rows, d, Strides(inner, step));
      tmp.noalias() = m * at;
      m = tmp;
    }
  } else {
    for (Eigen::Index r = 0; r < rows; ++r) {
      StridedMap m(data + offset + r * step, outer, d, Strides(inner, d * inner));
      tmp.noalias() = m * at;
      m = tmp;
    }
  }
}

}  // namespace

void apply_local(CVec& psi, const SpaceLayout& layout, int k, const CMat& a, int aux_value) {
  if (psi.size() != layout.total_dim()) {
    throw Error(ErrorKind::kLayoutMismatch, "state length does not match layout");
  }
  apply_local_raw(psi.data(), layout, k, a, aux_value);
}

void apply_local_columns(CMat& m, const SpaceLayout& layout, int k, const CMat& a,
                         int aux_value) {
  if (m.rows() != layout.total_dim()) {
    throw Error(ErrorKind::kLayoutMismatch, "matrix rows do not match layout");
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    apply_local_raw(m.col(c).data(), layout, k, a, aux_value);
  }
}

// ---------------------------------------------------------------- diagnostics

namespace {

std::vector<double> tails_from_diagonal(const SpaceLayout& l, const Eigen::VectorXd& pop) {
  std::vector<double> out;
  for (int k = 0; k < l.mode_count(); ++k) {
    const int d = l.dims()[k];
    const int cut = d - std::max(1, d / 10);
    const Eigen::Index inner = l.inner_dim(k);
    double t = 0.0;
    for (Eigen::Index idx = 0; idx < pop.size(); ++idx) {
      if ((idx / inner) % d >= cut) t += pop(idx);
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace

std::vector<double> tail_mass(const QuantumState& s) {
  return tails_from_diagonal(s.layout(), s.amplitudes().cwiseAbs2());
}

std::vector<double> tail_mass(const DensityMatrix& rho) {
  return tails_from_diagonal(rho.layout(), rho.entries().diagonal().real());
}

std::vector<std::string> truncation_warnings(const std::vector<double>& tails, double threshold) {
  std::vector<std::string> out;
  for (size_t k = 0; k < tails.size(); ++k) {
    if (tails[k] > threshold) {
      std::ostringstream os;
      os << "mode " << k << ": tail mass " << tails[k] << " in top 10% of Fock levels";
      out.push_back(os.str());
    }
  }
  return out;
}

}  // namespace gridsim
