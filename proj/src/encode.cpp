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

#include "gridsim/encode.hpp"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>

#include "gridsim/error.hpp"
#include "gridsim/rng.hpp"

namespace gridsim {

namespace {

int layer_size(int modes) { return 2 + 2 * modes; }

// Noiseless evaluation of the ansatz on |vac, g>, with the oscillator part
// kept as separate g and e components.
class AnsatzEvaluator {
 public:
  AnsatzEvaluator(const QuantumState& target, int depth)
      : osc_(target.layout()), target_(target.amplitudes()), depth_(depth) {
    for (int k = 0; k < osc_.mode_count(); ++k) kernels_.emplace_back(osc_.dim(k));
  }

  double fidelity(const double* p) const {
    const int modes = osc_.mode_count();
    CVec g = CVec::Zero(osc_.total_dim()), e = CVec::Zero(osc_.total_dim());
    g(0) = 1.0;
    const int ls = layer_size(modes);
    for (int j = 0; j < depth_; ++j) {
      rotate(p[j * ls], p[j * ls + 1], g, e);
      CVec ng = e, ne = g;
      for (int k = 0; k < modes; ++k) {
        const cplx b(p[j * ls + 2 + 2 * k], p[j * ls + 3 + 2 * k]);
        displace(k, -b / 2.0, ng);
        displace(k, b / 2.0, ne);
      }
      g = std::move(ng);
      e = std::move(ne);
    }
    rotate(p[depth_ * ls], p[depth_ * ls + 1], g, e);
    return std::abs(target_.dot(g));
  }

 private:
  static void rotate(double theta, double phi, CVec& g, CVec& e) {
    const CMat r = aux_rotation_matrix(theta, phi);
    CVec ng = r(0, 0) * g + r(0, 1) * e;
    e = r(1, 0) * g + r(1, 1) * e;
    g = std::move(ng);
  }

  void displace(int k, cplx alpha, CVec& v) const {
    if (alpha == cplx(0.0)) return;
    if (osc_.mode_count() == 1) {
      v = kernels_[0].apply(alpha, v);
    } else {
      apply_local(v, osc_, k, kernels_[k].matrix(alpha));
    }
  }

  SpaceLayout osc_;
  CVec target_;
  int depth_;
  std::vector<DisplacementKernel> kernels_;
};

struct Objective {
  const AnsatzEvaluator* eval = nullptr;
  int evaluations = 0;
  double best = -1.0;
  std::vector<double> best_x;
};

double objective(const gsl_vector* x, void* data) {
  auto* o = static_cast<Objective*>(data);
  const double f = o->eval->fidelity(x->data);
  ++o->evaluations;
  if (f > o->best) {
    o->best = f;
    o->best_x.assign(x->data, x->data + x->size);
  }
  return -f;
}

void minimize(Objective& obj, std::vector<double> x0, int budget, double target) {
  const size_t n = x0.size();
  gsl_multimin_function fn{&objective, n, &obj};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(n),
                                                                gsl_vector_free);
  for (size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(step.get(), 0.5);
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n),
      gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
  const int stop = obj.evaluations + budget;
  while (obj.evaluations < stop && obj.best < target) {
    if (gsl_multimin_fminimizer_iterate(s.get())) break;
    if (gsl_multimin_fminimizer_size(s.get()) < 1e-8) break;
  }
}

}  // namespace

Circuit encoding_circuit(const std::vector<double>& params, int depth, const SpaceLayout& layout,
                         const GateDurations& durations) {
  if (!layout.has_aux()) throw Error(ErrorKind::kLayoutMismatch, "encoding needs an auxiliary");
  const int modes = layout.mode_count();
  const int ls = layer_size(modes);
  if (static_cast<int>(params.size()) != depth * ls + 2) {
    throw Error(ErrorKind::kInvalidArgument, "parameter count does not match the ansatz");
  }
  Circuit c{layout, {}};
  for (int j = 0; j < depth; ++j) {
    c.steps.push_back(rotation_step(params[j * ls], params[j * ls + 1], durations));
    std::vector<cplx> beta;
    for (int k = 0; k < modes; ++k) {
      beta.emplace_back(params[j * ls + 2 + 2 * k], params[j * ls + 3 + 2 * k]);
    }
    c.steps.push_back(ecd_step(beta, durations));
  }
  c.steps.push_back(rotation_step(params[depth * ls], params[depth * ls + 1], durations));
  return c;
}

EncodeResult encode_logical(const CodeWords& target, LogicalState which, int depth,
                            const SpaceLayout& layout, const EncodeOptions& opts) {
  if (depth < 0 || depth > 10) throw Error(ErrorKind::kInvalidArgument, "depth must be in [0, 10]");
  if (!layout.has_aux() || layout.oscillator_part() != target.ket_zero.layout()) {
    throw Error(ErrorKind::kLayoutMismatch, "encoding layout does not match the codewords");
  }
  const QuantumState t = target.logical(which);
  AnsatzEvaluator eval(t, depth);
  const int modes = layout.mode_count();
  const int n = depth * layer_size(modes) + 2;
  Objective obj;
  obj.eval = &eval;
  CounterRng rng(opts.seed, 0x656e636fULL);
  const int restarts = std::max(1, opts.restarts);
  const int per_start = std::max(1, opts.max_evaluations / restarts);
  for (int r = 0; r < restarts && obj.best < opts.target_fidelity; ++r) {
    std::vector<double> x0(n);
    for (int j = 0; j < depth; ++j) {
      const int o = j * layer_size(modes);
      x0[o] = M_PI * rng.uniform();
      x0[o + 1] = 2 * M_PI * rng.uniform();
      for (int k = 0; k < 2 * modes; ++k) {
        x0[o + 2 + k] = opts.beta_scale * (2.0 * rng.uniform() - 1.0);
      }
    }
    x0[n - 2] = M_PI * rng.uniform();
    x0[n - 1] = 2 * M_PI * rng.uniform();
    // One random start, then a restart of the simplex around its optimum.
    minimize(obj, x0, per_start / 2, opts.target_fidelity);
    if (obj.best < opts.target_fidelity) {
      minimize(obj, obj.best_x, per_start - per_start / 2, opts.target_fidelity);
    }
  }
  EncodeResult res;
  res.parameters = obj.best_x;
  res.fidelity = obj.best;
  res.evaluations = obj.evaluations;
  res.reached_target = obj.best >= opts.target_fidelity;
  res.circuit = encoding_circuit(res.parameters, depth, layout, opts.durations);
  return res;
}

}  // namespace gridsim
