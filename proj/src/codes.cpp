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

#include "gridsim/codes.hpp"

#include <algorithm>
#include <cmath>

#include "gridsim/error.hpp"

namespace gridsim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in (0, 1)");
  }
}

PhaseSpaceVector vec(std::string label, std::vector<cplx> a) {
  return PhaseSpaceVector{std::move(a), std::move(label)};
}

bool multiple_of(double x, double unit, double tol = 1e-9) {
  const double r = x / unit;
  return std::abs(r - std::round(r)) < tol;
}

}  // namespace

PhaseSpaceVector PhaseSpaceVector::scaled(cplx c) const {
  PhaseSpaceVector out = *this;
  for (auto& a : out.alpha) a *= c;
  return out;
}

double PhaseSpaceVector::norm() const {
  double s = 0.0;
  for (const auto& a : alpha) s += std::norm(a);
  return std::sqrt(s);
}

double symplectic_phase(const PhaseSpaceVector& a, const PhaseSpaceVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "symplectic_phase: mode counts differ");
  }
  cplx s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a.alpha[k] * std::conj(b.alpha[k]);
  return 2.0 * s.imag();
}

double phase_space_angle(const PhaseSpaceVector& a, const PhaseSpaceVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kInvalidArgument, "phase_space_angle: mode counts differ");
  }
  double dot = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    dot += a.alpha[k].real() * b.alpha[k].real() + a.alpha[k].imag() * b.alpha[k].imag();
  }
  const double c = std::clamp(dot / (a.norm() * b.norm()), -1.0, 1.0);
  return std::acos(c);
}

void CodeSpec::validate() const {
  auto check_len = [&](const PhaseSpaceVector& v) {
    if (v.size() != mode_count) {
      throw Error(ErrorKind::kInvalidArgument,
                  "vector " + v.label + " length does not match mode count");
    }
  };
  for (const auto& s : stabilizers) check_len(s);
  check_len(logical_x);
  check_len(logical_z);
  for (size_t i = 0; i < stabilizers.size(); ++i) {
    for (size_t j = i + 1; j < stabilizers.size(); ++j) {
      if (!multiple_of(symplectic_phase(stabilizers[i], stabilizers[j]), 2 * M_PI)) {
        throw Error(ErrorKind::kInvalidArgument, "stabilizers " + stabilizers[i].label + " and " +
                                                     stabilizers[j].label + " do not commute");
      }
    }
    for (const auto* p : {&logical_x, &logical_z}) {
      if (!multiple_of(symplectic_phase(stabilizers[i], *p), 2 * M_PI)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "logical " + p->label + " does not commute with " + stabilizers[i].label);
      }
    }
  }
  const double xz = symplectic_phase(logical_x, logical_z);
  if (!multiple_of(xz - M_PI, 2 * M_PI)) {
    throw Error(ErrorKind::kInvalidArgument, "logical X and Z must anticommute");
  }
}

int CodeSpec::stabilizer_index(const std::string& label) const {
  for (size_t i = 0; i < stabilizers.size(); ++i) {
    if (stabilizers[i].label == label) return static_cast<int>(i);
  }
  throw Error(ErrorKind::kIndexOutOfRange, "unknown stabilizer " + label);
}

double lattice_constant() { return 2.0 * std::sqrt(M_PI); }

CodeSpec gkp_square(double delta) {
  check_delta(delta);
  const double l = lattice_constant();
  CodeSpec c;
  c.name = "gkp";
  c.mode_count = 1;
  c.l = l;
  c.delta = delta;
  c.stabilizers = {vec("T_q", {cplx(0, l / kSqrt2)}), vec("T_p", {cplx(l / kSqrt2, 0)})};
  c.logical_x = vec("X", {cplx(l / (2 * kSqrt2), 0)});
  c.logical_z = vec("Z", {cplx(0, l / (2 * kSqrt2))});
  return c;
}

CodeSpec tesseract(double delta) {
  check_delta(delta);
  const double l = lattice_constant();
  const double a = l / std::pow(2.0, 0.25) / kSqrt2;   // exp(-i l p / 2^{1/4})
  const double d = l / std::pow(2.0, 0.75) / kSqrt2;   // exp(i l q / 2^{3/4})
  const double x = l / std::pow(2.0, 1.25) / kSqrt2;   // exp(-i l p / 2^{5/4})
  CodeSpec c;
  c.name = "tesseract";
  c.mode_count = 2;
  c.l = l;
  c.delta = delta;
  c.stabilizers = {vec("T1", {cplx(a, 0), 0.0}), vec("T2", {cplx(0, d), cplx(0, d)}),
                   vec("T3", {0.0, cplx(a, 0)}), vec("T4", {cplx(0, d), cplx(0, -d)})};
  c.logical_x = vec("X", {cplx(x, 0), cplx(x, 0)});
  c.logical_z = vec("Z", {cplx(0, d), 0.0});
  return c;
}

namespace {

nlohmann::json vec_to_json(const PhaseSpaceVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& z : v.alpha) a.push_back({z.real(), z.imag()});
  return {{"label", v.label}, {"alpha", a}};
}

PhaseSpaceVector vec_from_json(const nlohmann::json& j) {
  PhaseSpaceVector v;
  v.label = j.at("label").get<std::string>();
  for (const auto& p : j.at("alpha")) v.alpha.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return v;
}

}  // namespace

nlohmann::json code_to_json(const CodeSpec& code) {
  nlohmann::json stabs = nlohmann::json::array();
  for (const auto& s : code.stabilizers) stabs.push_back(vec_to_json(s));
  return {{"name", code.name},
          {"mode_count", code.mode_count},
          {"l", code.l},
          {"delta", code.delta},
          {"stabilizers", stabs},
          {"logical_x", vec_to_json(code.logical_x)},
          {"logical_z", vec_to_json(code.logical_z)}};
}

CodeSpec code_from_json(const nlohmann::json& j) {
  try {
    CodeSpec c;
    c.name = j.at("name").get<std::string>();
    c.mode_count = j.at("mode_count").get<int>();
    c.l = j.at("l").get<double>();
    c.delta = j.at("delta").get<double>();
    for (const auto& s : j.at("stabilizers")) c.stabilizers.push_back(vec_from_json(s));
    c.logical_x = vec_from_json(j.at("logical_x"));
    c.logical_z = vec_from_json(j.at("logical_z"));
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("code json: ") + e.what());
  }
}

std::vector<CMat> dressed_factors(const PhaseSpaceVector& v, double delta,
                                  const std::vector<int>& mode_dims) {
  if (static_cast<int>(mode_dims.size()) < v.size()) {
    throw Error(ErrorKind::kLayoutMismatch, "layout does not cover all modes of the vector");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::kNumericRange, "dressing requires 0 <= delta <= 1");
  }
  const double up = std::exp(delta * delta);
  std::vector<CMat> out;
  for (int k = 0; k < v.size(); ++k) {
    const int n = mode_dims[k];
    const CMat a = annihilation(n).entries();
    const cplx al = v.alpha[k];
    if (al == cplx(0.0)) {
      out.push_back(CMat::Identity(n, n));
      continue;
    }
    // E a E^{-1} = e^{D^2} a, E a^dag E^{-1} = e^{-D^2} a^dag.
    const CMat gen = (al / up) * a.adjoint() - (std::conj(al) * up) * a;
    out.push_back(expm(gen));
  }
  return out;
}

OperatorMatrix dress_finite_energy(const PhaseSpaceVector& v, double delta,
                                   const SpaceLayout& layout) {
  const auto f = dressed_factors(v, delta, layout.dims());
  if (v.size() > layout.mode_count()) {
    throw Error(ErrorKind::kLayoutMismatch, "layout does not cover all modes of the vector");
  }
  CMat m = CMat::Identity(layout.total_dim(), layout.total_dim());
  for (int k = 0; k < v.size(); ++k) apply_local_columns(m, layout, k, f[k]);
  return OperatorMatrix(layout, m);
}

cplx local_expectation(const QuantumState& s, const std::vector<CMat>& factors) {
  CVec v = s.amplitudes();
  for (size_t k = 0; k < factors.size(); ++k) {
    apply_local(v, s.layout(), static_cast<int>(k), factors[k]);
  }
  return s.amplitudes().dot(v);
}

cplx local_expectation(const DensityMatrix& rho, const std::vector<CMat>& factors) {
  CMat m = rho.entries();
  for (size_t k = 0; k < factors.size(); ++k) {
    apply_local_columns(m, rho.layout(), static_cast<int>(k), factors[k]);
  }
  return m.trace();
}

LogicalState parse_logical_state(const std::string& s) {
  if (s == "0") return LogicalState::kZero;
  if (s == "1") return LogicalState::kOne;
  if (s == "plus" || s == "+") return LogicalState::kPlus;
  if (s == "minus" || s == "-") return LogicalState::kMinus;
  if (s == "i" || s == "+i") return LogicalState::kPlusI;
  if (s == "-i") return LogicalState::kMinusI;
  throw Error(ErrorKind::kInvalidArgument, "unknown logical state '" + s + "'");
}

std::string to_string(LogicalState s) {
  switch (s) {
    case LogicalState::kZero: return "0";
    case LogicalState::kOne: return "1";
    case LogicalState::kPlus: return "plus";
    case LogicalState::kMinus: return "minus";
    case LogicalState::kPlusI: return "i";
    case LogicalState::kMinusI: return "-i";
  }
  return "?";
}

QuantumState CodeWords::logical(LogicalState which) const {
  const CVec& z = ket_zero.amplitudes();
  const CVec& o = ket_one.amplitudes();
  const double r = 1.0 / kSqrt2;
  CVec v;
  switch (which) {
    case LogicalState::kZero: v = z; break;
    case LogicalState::kOne: v = o; break;
    case LogicalState::kPlus: v = r * (z + o); break;
    case LogicalState::kMinus: v = r * (z - o); break;
    case LogicalState::kPlusI: v = r * (z + cplx(0, 1) * o); break;
    case LogicalState::kMinusI: v = r * (z - cplx(0, 1) * o); break;
  }
  QuantumState s(ket_zero.layout(), v);
  s.normalize();
  return s;
}

Eigen::VectorXd hermite_functions(int n, double x) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(n);
  psi(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n > 1) psi(1) = kSqrt2 * x * psi(0);
  for (int k = 1; k + 1 < n; ++k) {
    psi(k + 1) = std::sqrt(2.0 / (k + 1)) * x * psi(k) - std::sqrt(static_cast<double>(k) / (k + 1)) * psi(k - 1);
  }
  return psi;
}

namespace {

// Real-amplitude stabilizers generate the position lattice (a real alpha
// shifts q by sqrt2 * alpha); the real logical X gives the |1> offset.
CVec lattice_sum(const CodeSpec& code, const std::vector<int>& dims, int mu) {
  const int m = code.mode_count;
  std::vector<Eigen::VectorXd> gens;
  for (const auto& s : code.stabilizers) {
    bool real = true;
    for (const auto& a : s.alpha) real = real && std::abs(a.imag()) < 1e-12;
    if (real) {
      Eigen::VectorXd g(m);
      for (int k = 0; k < m; ++k) g(k) = kSqrt2 * s.alpha[k].real();
      gens.push_back(g);
    }
  }
  Eigen::VectorXd offset(m);
  for (int k = 0; k < m; ++k) {
    if (std::abs(code.logical_x.alpha[k].imag()) > 1e-12) {
      throw Error(ErrorKind::kInvalidArgument, "codeword construction needs a real logical X");
    }
    offset(k) = kSqrt2 * code.logical_x.alpha[k].real();
  }
  if (static_cast<int>(gens.size()) != m) {
    throw Error(ErrorKind::kInvalidArgument,
                "codeword construction needs one real stabilizer per mode");
  }
  Eigen::MatrixXd g(m, m);
  for (int j = 0; j < m; ++j) g.col(j) = gens[j];
  if (std::abs(g.determinant()) < 1e-9) {
    throw Error(ErrorKind::kInvalidArgument, "real stabilizers are linearly dependent");
  }
  std::vector<double> cutoff(m);
  double cmax = 0.0;
  for (int k = 0; k < m; ++k) {
    cutoff[k] = std::sqrt(2.0 * dims[k] + 1.0) + 12.0;
    cmax = std::max(cmax, cutoff[k]);
  }
  // Enough integer combinations to cover the box where any psi_n is non-negligible.
  const Eigen::MatrixXd ginv = g.inverse();
  const int kmax = static_cast<int>(std::ceil(ginv.cwiseAbs().rowwise().sum().maxCoeff() *
                                              (cmax + offset.norm()))) + 1;
  Eigen::Index total = 1;
  for (int k = 0; k < m; ++k) total *= dims[k];
  CVec acc = CVec::Zero(total);
  std::vector<int> idx(m, -kmax);
  while (true) {
    Eigen::VectorXd coeff(m);
    for (int j = 0; j < m; ++j) coeff(j) = idx[j];
    const Eigen::VectorXd x = g * coeff + mu * offset;
    bool inside = true;
    for (int k = 0; k < m; ++k) inside = inside && std::abs(x(k)) <= cutoff[k];
    if (inside) {
      CVec term = CVec::Ones(1);
      for (int k = 0; k < m; ++k) {
        const Eigen::VectorXd h = hermite_functions(dims[k], x(k));
        term = kron(term, h.cast<cplx>());
      }
      acc += term;
    }
    int j = m - 1;
    while (j >= 0 && ++idx[j] > kmax) idx[j--] = -kmax;
    if (j < 0) break;
  }
  // E_D = exp(-D^2 sum_k n_k).
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rem = i;
    int nsum = 0;
    for (int k = m - 1; k >= 0; --k) {
      nsum += static_cast<int>(rem % dims[k]);
      rem /= dims[k];
    }
    acc(i) *= std::exp(-code.delta * code.delta * nsum);
  }
  return acc;
}

}  // namespace

CodeWords construct_codewords(const CodeSpec& code, const SpaceLayout& layout, double floor) {
  code.validate();
  const SpaceLayout osc = layout.has_aux() ? layout.oscillator_part() : layout;
  if (osc.mode_count() != code.mode_count) {
    throw Error(ErrorKind::kLayoutMismatch, "layout mode count does not match the code");
  }
  CVec z = lattice_sum(code, osc.dims(), 0);
  CVec o = lattice_sum(code, osc.dims(), 1);
  z.normalize();
  o -= z.dot(o) * z;
  o.normalize();
  CodeWords cw{QuantumState(osc, z), QuantumState(osc, o), {}, {}};
  for (const auto& s : code.stabilizers) {
    const auto f = dressed_factors(s, code.delta, osc.dims());
    cw.achieved.push_back(std::min(local_expectation(cw.ket_zero, f).real(),
                                   local_expectation(cw.ket_one, f).real()));
  }
  for (const auto* k : {&cw.ket_zero, &cw.ket_one}) {
    for (auto& w : truncation_warnings(tail_mass(*k))) cw.warnings.push_back(w);
  }
  for (double a : cw.achieved) {
    if (a < floor) {
      throw ConstructionQualityError(
          "codeword stabilizer expectation below floor; increase the truncation", cw.achieved);
    }
  }
  return cw;
}

double mean_photon_estimate(double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::kInvalidArgument, "delta must be positive");
  return 1.0 / (2.0 * delta * delta) - 0.5;
}

CodeWords binomial_11_codewords(int dim) {
  if (dim < 5) throw Error(ErrorKind::kInvalidDimension, "binomial code needs dim >= 5");
  SpaceLayout l = SpaceLayout::oscillators({dim});
  CVec z = CVec::Zero(dim), o = CVec::Zero(dim);
  z(0) = z(4) = 1.0 / kSqrt2;
  o(2) = 1.0;
  return CodeWords{QuantumState(l, z), QuantumState(l, o), {}, {}};
}

}  // namespace gridsim
