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

#include "gridsim/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gridsim/error.hpp"
#include "gridsim/rng.hpp"

namespace gridsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json number_or_inf(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

LogicalState apply_logical(LogicalState s, int x, int z) {
  auto flip = [](LogicalState a, LogicalState b, LogicalState v) {
    return v == a ? b : (v == b ? a : v);
  };
  if (x) {
    s = flip(LogicalState::kZero, LogicalState::kOne, s);
    s = flip(LogicalState::kPlusI, LogicalState::kMinusI, s);
  }
  if (z) {
    s = flip(LogicalState::kPlus, LogicalState::kMinus, s);
    s = flip(LogicalState::kPlusI, LogicalState::kMinusI, s);
  }
  return s;
}

LogicalState orthogonal(LogicalState s) {
  switch (s) {
    case LogicalState::kZero: return LogicalState::kOne;
    case LogicalState::kOne: return LogicalState::kZero;
    case LogicalState::kPlus: return LogicalState::kMinus;
    case LogicalState::kMinus: return LogicalState::kPlus;
    case LogicalState::kPlusI: return LogicalState::kMinusI;
    case LogicalState::kMinusI: return LogicalState::kPlusI;
  }
  return s;
}

}  // namespace

std::vector<int> resolve_mode_dims(const CodeSpec& code, const std::vector<int>& dims) {
  if (!dims.empty()) {
    if (static_cast<int>(dims.size()) != code.mode_count) {
      throw Error(ErrorKind::kInvalidArgument, "mode_dims length must match the code");
    }
    return dims;
  }
  return std::vector<int>(code.mode_count, code.mode_count == 1 ? 80 : 50);
}

namespace {

QuantumState with_ground_aux(const QuantumState& osc) {
  const SpaceLayout l = SpaceLayout::with_aux(osc.layout().dims());
  CVec v = CVec::Zero(l.total_dim());
  for (Eigen::Index i = 0; i < osc.amplitudes().size(); ++i) v(2 * i) = osc.amplitudes()(i);
  return QuantumState(l, v);
}

CVec ground_component(const QuantumState& s) {
  const CVec& v = s.amplitudes();
  CVec g(v.size() / 2);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = v(2 * i);
  return g;
}

// Weight of the expected logical state vs its orthogonal partner.
std::pair<double, double> decode_weights(const CodeWords& cw, LogicalState initial,
                                         const ShiftFrame& frame, const CVec& osc) {
  if (!frame.is_logical()) {
    throw Error(ErrorKind::kInvalidArgument,
                "ideal decoding needs a logical frame; end on a complete stabilizer pair");
  }
  const auto [x, z] = frame.logical_pauli();
  const LogicalState right = apply_logical(initial, x, z);
  const double wr = std::norm(cw.logical(right).amplitudes().dot(osc));
  const double ww = std::norm(cw.logical(orthogonal(right)).amplitudes().dot(osc));
  return {wr, ww};
}

double binomial_z(double f1, double f0, int n) {
  const double var = (f1 * (1 - f1) + f0 * (1 - f0)) / n;
  const double diff = f1 - f0;
  if (var <= 0.0) return diff == 0.0 ? 0.0 : (diff > 0 ? kInf : -kInf);
  return diff / std::sqrt(var);
}

void window_statistics(SignatureResult& inj, const SignatureResult& base, int first, int last) {
  inj.detection_statistic = -kInf;
  inj.max_elevation = -kInf;
  for (int r = first; r <= last && r < static_cast<int>(inj.one_frequency.size()); ++r) {
    const double z = binomial_z(inj.one_frequency[r], base.one_frequency[r], inj.shots);
    inj.detection_statistic = std::max(inj.detection_statistic, z);
    inj.max_elevation = std::max(inj.max_elevation, inj.one_frequency[r] - base.one_frequency[r]);
  }
}

// Per-stabilizer compiled sBs rounds on a fixed layout.
class SbsEngine {
 public:
  SbsEngine(const CodeSpec& code, const SpaceLayout& layout, const std::optional<NoiseModel>& noise,
            CompiledCircuit::Target target)
      : code_(code), layout_(layout) {
    SbsOptions so;
    if (noise) so.durations = noise->durations;
    for (size_t j = 0; j < code.stabilizers.size(); ++j) {
      rounds_.emplace_back(sbs_round(code, static_cast<int>(j), layout, so), noise, target);
    }
  }
  const CompiledCircuit& round(int j) const { return rounds_[j]; }

 private:
  const CodeSpec& code_;
  SpaceLayout layout_;
  std::vector<CompiledCircuit> rounds_;
};

}  // namespace

// ------------------------------------------------------------ threads

int worker_count() {
  if (const char* env = std::getenv("GRIDSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ------------------------------------------------------------ schedule and frame

std::vector<int> sbs_schedule(const CodeSpec& code, int rounds, int repeat) {
  if (repeat < 1) throw Error(ErrorKind::kInvalidArgument, "schedule repeat must be >= 1");
  const int n = static_cast<int>(code.stabilizers.size());
  std::vector<int> s(std::max(rounds, 0));
  for (int r = 0; r < rounds; ++r) s[r] = (r / repeat) % n;
  return s;
}

ShiftFrame::ShiftFrame(const CodeSpec& code)
    : code_(&code), pending_(code.stabilizers.size(), 0) {}

void ShiftFrame::record(int j) { pending_.at(j) ^= 1; }

int ShiftFrame::sign(const PhaseSpaceVector& v) const {
  long long s = 0;
  for (size_t j = 0; j < pending_.size(); ++j) {
    if (pending_[j]) s += std::llround(symplectic_phase(code_->stabilizers[j], v) / (2 * M_PI));
  }
  return (s % 2 == 0) ? 1 : -1;
}

bool ShiftFrame::is_logical() const {
  for (const auto& s : code_->stabilizers) {
    if (sign(s) < 0) return false;
  }
  return true;
}

std::pair<int, int> ShiftFrame::logical_pauli() const {
  return {sign(code_->logical_z) < 0 ? 1 : 0, sign(code_->logical_x) < 0 ? 1 : 0};
}

double trace_distance(const CMat& a, const CMat& b) {
  const CMat d = a - b;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ------------------------------------------------------------ characteristic function

std::vector<cplx> square_grid(double extent, int points) {
  if (points < 1) throw Error(ErrorKind::kInvalidArgument, "grid needs at least one point");
  std::vector<cplx> g;
  for (int j = 0; j < points; ++j) {
    for (int i = 0; i < points; ++i) {
      const double x = points == 1 ? 0.0 : -extent + 2 * extent * i / (points - 1);
      const double y = points == 1 ? 0.0 : -extent + 2 * extent * j / (points - 1);
      g.emplace_back(x, y);
    }
  }
  return g;
}

namespace {

void check_single_mode(const SpaceLayout& l) {
  if (l.has_aux() || l.subsystem_count() != 1) {
    throw Error(ErrorKind::kLayoutMismatch,
                "characteristic_function_scan needs a single-mode state; trace out first");
  }
}

double top_tail(const Eigen::VectorXd& pop) {
  const int d = static_cast<int>(pop.size());
  const int cut = d - std::max(1, d / 10);
  return pop.tail(d - cut).sum();
}

}  // namespace

CharScan characteristic_function_scan(const DensityMatrix& rho, const std::vector<cplx>& grid,
                                      double tail_threshold) {
  check_single_mode(rho.layout());
  const int n = rho.layout().dim(0);
  DisplacementKernel k(n);
  CharScan out{grid, {}, {}};
  for (const cplx& b : grid) {
    const CMat d = k.matrix(b);
    const CMat dr = d * rho.entries();
    out.values.push_back(dr.trace());
    const Eigen::VectorXd pop = (dr * d.adjoint()).diagonal().real();
    out.truncation_flag.push_back(top_tail(pop) > tail_threshold);
  }
  return out;
}

CharScan characteristic_function_scan(const QuantumState& psi, const std::vector<cplx>& grid,
                                      double tail_threshold) {
  check_single_mode(psi.layout());
  DisplacementKernel k(psi.layout().dim(0));
  CharScan out{grid, {}, {}};
  for (const cplx& b : grid) {
    const CVec v = k.apply(b, psi.amplitudes());
    out.values.push_back(psi.amplitudes().dot(v));
    out.truncation_flag.push_back(top_tail(v.cwiseAbs2()) > tail_threshold);
  }
  return out;
}

// ------------------------------------------------------------ stabilization

StabilizeResult stabilize(const CodeSpec& code, const StabilizeOptions& opts) {
  const std::vector<int> dims = resolve_mode_dims(code, opts.mode_dims);
  const SpaceLayout layout = SpaceLayout::with_aux(dims);
  const SpaceLayout osc = layout.oscillator_part();
  SbsEngine engine(code, layout, opts.noise, CompiledCircuit::Target::kDensity);
  std::optional<CodeWords> cw;
  QuantumState start;
  if (opts.start) {
    cw = construct_codewords(code, osc);
    start = cw->logical(*opts.start);
  } else {
    std::vector<int> zeros(osc.subsystem_count(), 0);
    start = QuantumState::basis(osc, zeros);
  }
  DensityMatrix rho = DensityMatrix::from_state(with_ground_aux(start));
  std::vector<std::vector<CMat>> factors;
  StabilizeResult res;
  for (const auto& s : code.stabilizers) {
    factors.push_back(dressed_factors(s, code.delta, dims));
    res.labels.push_back(s.label);
  }
  const std::vector<int> sched = sbs_schedule(code, opts.rounds, opts.repeat);
  ShiftFrame frame(code);
  Eigen::VectorXd nvec(layout.total_dim());
  for (Eigen::Index i = 0; i < nvec.size(); ++i) {
    Eigen::Index rem = i / 2;
    int total = 0;
    for (int k = osc.subsystem_count() - 1; k >= 0; --k) {
      total += static_cast<int>(rem % dims[k]);
      rem /= dims[k];
    }
    nvec(i) = total;
  }
  for (int r = 0; r < opts.rounds; ++r) {
    const RunRecord rec = engine.round(sched[r]).run(rho, MeasureMode::kAverage);
    frame.record(sched[r]);
    std::vector<double> e;
    for (size_t j = 0; j < code.stabilizers.size(); ++j) {
      e.push_back(frame.sign(code.stabilizers[j]) * local_expectation(rho, factors[j]).real());
    }
    res.expectation.push_back(e);
    res.p_one.push_back(rec.p_one.empty() ? 0.0 : rec.p_one.front());
    res.mean_photons.push_back(rho.entries().diagonal().real().dot(nvec));
  }
  res.final_state = partial_trace(rho, [&] {
    std::vector<int> keep(osc.subsystem_count());
    for (int k = 0; k < osc.subsystem_count(); ++k) keep[k] = k;
    return keep;
  }());
  if (opts.start && frame.is_logical()) {
    const auto [x, z] = frame.logical_pauli();
    const QuantumState ref = cw->logical(apply_logical(*opts.start, x, z));
    res.final_trace_distance =
        trace_distance(res.final_state.entries(), DensityMatrix::from_state(ref).entries());
  }
  return res;
}

double sbs_fixed_point_distance(const CodeSpec& code, const CodeWords& cw, LogicalState which,
                                int stabilizer_index, int rounds, int repeat) {
  const SpaceLayout osc = cw.ket_zero.layout();
  const SpaceLayout layout = SpaceLayout::with_aux(osc.dims());
  SbsEngine engine(code, layout, std::nullopt, CompiledCircuit::Target::kDensity);
  DensityMatrix rho = DensityMatrix::from_state(with_ground_aux(cw.logical(which)));
  const int n = static_cast<int>(code.stabilizers.size());
  ShiftFrame frame(code);
  for (int r = 0; r < rounds; ++r) {
    const int j = (stabilizer_index + r / repeat) % n;
    engine.round(j).run(rho, MeasureMode::kAverage);
    frame.record(j);
  }
  if (!frame.is_logical()) {
    throw Error(ErrorKind::kInvalidArgument,
                "fixed-point reference needs a logical frame; use complete stabilizer pairs");
  }
  std::vector<int> keep(osc.subsystem_count());
  for (int k = 0; k < osc.subsystem_count(); ++k) keep[k] = k;
  const DensityMatrix red = partial_trace(rho, keep);
  const auto [x, z] = frame.logical_pauli();
  const QuantumState ref = cw.logical(apply_logical(which, x, z));
  return trace_distance(red.entries(), DensityMatrix::from_state(ref).entries());
}

// ------------------------------------------------------------ lifetime

ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y, int skip) {
  if (t.size() != y.size()) throw Error(ErrorKind::kInvalidArgument, "fit: length mismatch");
  std::vector<double> xs, ls;
  for (size_t i = std::max(skip, 0); i < t.size(); ++i) {
    if (!(y[i] > 0.0)) {
      throw FitFailureError("non-positive expectation value in the fit window", y);
    }
    xs.push_back(t[i]);
    ls.push_back(std::log(y[i]));
  }
  const size_t n = xs.size();
  if (n < 3) throw FitFailureError("too few points to fit", y);
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ls[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ls[i] - my);
  }
  if (sxx <= 0.0) throw FitFailureError("degenerate time axis", y);
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double ssr = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ls[i] - (icpt + slope * xs[i]);
    ssr += r * r;
  }
  const double se_slope = std::sqrt(ssr / (n - 2) / sxx);
  ExpFit f;
  f.amplitude = std::exp(icpt);
  if (slope >= 0.0) {
    f.decay_time = kInf;
    f.decay_time_stderr = kInf;
  } else {
    f.decay_time = -1.0 / slope;
    f.decay_time_stderr = se_slope / (slope * slope);
  }
  return f;
}

nlohmann::json LifetimeResult::to_json() const {
  return {{"pauli", pauli},
          {"qec", qec},
          {"t_round", t_round},
          {"t_l", number_or_inf(t_l)},
          {"t_l_stderr", number_or_inf(t_l_stderr)},
          {"t_ref", number_or_inf(t_ref)},
          {"gain", number_or_inf(gain)},
          {"rounds", series.size()}};
}

LifetimeResult logical_lifetime(const CodeSpec& code, const NoiseModel& noise,
                                const LifetimeOptions& opts) {
  noise.validate();
  if (opts.rounds < 1) throw Error(ErrorKind::kInvalidArgument, "rounds must be >= 1");
  const std::vector<int> dims = resolve_mode_dims(code, opts.mode_dims);
  const SpaceLayout layout = SpaceLayout::with_aux(dims);
  const SpaceLayout osc = layout.oscillator_part();
  const CodeWords cw = construct_codewords(code, osc);
  const LogicalState init = opts.pauli == Pauli::kZ ? LogicalState::kZero : LogicalState::kPlus;
  const PhaseSpaceVector& p = opts.pauli == Pauli::kZ ? code.logical_z : code.logical_x;
  const auto factors = dressed_factors(p, code.delta, dims);
  DensityMatrix rho = DensityMatrix::from_state(with_ground_aux(cw.logical(init)));

  LifetimeResult res;
  res.pauli = opts.pauli == Pauli::kZ ? "Z" : "X";
  res.qec = opts.qec;
  res.t_round = noise.durations.sbs_round();
  res.t_ref = noise.kappa > 0.0 ? 1.0 / noise.kappa : kInf;

  std::optional<SbsEngine> engine;
  std::optional<CompiledCircuit> idle;
  if (opts.qec) {
    engine.emplace(code, layout, noise, CompiledCircuit::Target::kDensity);
  } else {
    idle.emplace(Circuit{layout, {wait_step(res.t_round)}}, noise,
                 CompiledCircuit::Target::kDensity);
  }
  const std::vector<int> sched = sbs_schedule(code, opts.rounds, opts.repeat);
  ShiftFrame frame(code);
  for (int r = 0; r < opts.rounds; ++r) {
    if (opts.qec) {
      engine->round(sched[r]).run(rho, MeasureMode::kAverage);
      frame.record(sched[r]);
    } else {
      idle->run(rho, MeasureMode::kAverage);
    }
    res.times.push_back((r + 1) * res.t_round);
    res.series.push_back(frame.sign(p) * local_expectation(rho, factors).real());
  }
  const ExpFit fit = fit_exponential(res.times, res.series, opts.fit_skip);
  res.t_l = fit.decay_time;
  res.t_l_stderr = fit.decay_time_stderr;
  res.gain = (std::isinf(res.t_l) || std::isinf(res.t_ref)) ? kInf : res.t_l / res.t_ref;
  return res;
}

// ------------------------------------------------------------ signatures

nlohmann::json SignatureResult::to_json() const {
  return {{"condition", condition},
          {"shots", shots},
          {"one_frequency", one_frequency},
          {"flip_probability", flip_probability},
          {"flip_stderr", flip_stderr},
          {"detection_statistic", number_or_inf(detection_statistic)},
          {"max_elevation", number_or_inf(max_elevation)}};
}

nlohmann::json IsthmusResult::to_json() const {
  return {{"initial_state", initial_state},
          {"rounds", rounds},
          {"baseline", baseline.to_json()},
          {"injected", injected.to_json()}};
}

namespace {

SignatureResult summarize(const std::string& label, const std::vector<TrajectoryRecord>& recs,
                          int rounds) {
  SignatureResult s;
  s.condition = label;
  s.shots = static_cast<int>(recs.size());
  s.one_frequency.assign(rounds, 0.0);
  double fsum = 0.0, fsq = 0.0;
  for (const auto& r : recs) {
    for (int k = 0; k < rounds; ++k) s.one_frequency[k] += r.outcomes[k];
    const double flip = 1.0 - r.fidelity;
    fsum += flip;
    fsq += flip * flip;
  }
  const double n = std::max<double>(recs.size(), 1);
  for (auto& f : s.one_frequency) f /= n;
  s.flip_probability = fsum / n;
  const double var = std::max(fsq / n - s.flip_probability * s.flip_probability, 0.0);
  s.flip_stderr = std::sqrt(var / n);
  return s;
}

void finish_decode(TrajectoryRecord& rec, const CodeWords& cw, LogicalState init,
                   const ShiftFrame& frame, const QuantumState& psi) {
  const auto [wr, ww] = decode_weights(cw, init, frame, ground_component(psi));
  rec.fidelity = (wr + ww) > 0.0 ? wr / (wr + ww) : 0.5;
}

}  // namespace

IsthmusResult isthmus_experiment(const CodeSpec& code, const IsthmusOptions& opts) {
  const std::vector<int> dims = resolve_mode_dims(code, opts.mode_dims);
  const SpaceLayout layout = SpaceLayout::with_aux(dims);
  const CodeWords cw = construct_codewords(code, layout.oscillator_part());
  if (opts.injection_round < 0 || opts.window < 1 || opts.shots < 1) {
    throw Error(ErrorKind::kInvalidArgument, "isthmus: invalid round/window/shot counts");
  }
  int rounds = opts.injection_round + 1 + opts.window;
  if (rounds % 2) ++rounds;
  const std::vector<int> sched = sbs_schedule(code, rounds, opts.repeat);
  const int j_inj = sched[opts.injection_round];

  // Choose the initial logical state that the injected half-shift would flip.
  ShiftFrame probe(code);
  probe.record(j_inj);
  LogicalState init;
  if (probe.sign(code.logical_z) < 0) {
    init = LogicalState::kZero;
  } else if (probe.sign(code.logical_x) < 0) {
    init = LogicalState::kPlus;
  } else {
    throw Error(ErrorKind::kInvalidArgument, "injected half-shift commutes with both logicals");
  }

  SbsEngine engine(code, layout, std::nullopt, CompiledCircuit::Target::kTrajectory);
  ErrorInjection inj;
  inj.step_index = 3;  // Big ECD
  inj.fraction = opts.fraction;
  const CompiledCircuit injected(inject_error(sbs_round(code, j_inj, layout), inj), std::nullopt,
                                 CompiledCircuit::Target::kTrajectory);
  const QuantumState start = with_ground_aux(cw.logical(init));

  std::vector<TrajectoryRecord> base(opts.shots), hit(opts.shots);
  parallel_for(opts.shots, [&](int shot) {
    CounterRng rng(CounterRng::derive(opts.seed, shot));
    QuantumState psi = start;
    TrajectoryRecord rec;
    ShiftFrame frame(code);
    auto step = [&](const CompiledCircuit& c, QuantumState& s, CounterRng& g, TrajectoryRecord& tr,
                    ShiftFrame& fr, int j) {
      const RunRecord rr = c.run(s, g, &tr.trace);
      tr.outcomes.push_back(rr.outcomes.front());
      fr.record(j);
    };
    for (int r = 0; r < opts.injection_round; ++r) step(engine.round(sched[r]), psi, rng, rec, frame, sched[r]);
    // Common random numbers: both arms continue from the same prefix and rng.
    QuantumState psi2 = psi;
    CounterRng rng2 = rng;
    TrajectoryRecord rec2 = rec;
    ShiftFrame frame2 = frame;
    for (int r = opts.injection_round; r < rounds; ++r) {
      step(engine.round(sched[r]), psi, rng, rec, frame, sched[r]);
      step(r == opts.injection_round ? injected : engine.round(sched[r]), psi2, rng2, rec2, frame2,
           sched[r]);
    }
    finish_decode(rec, cw, init, frame, psi);
    finish_decode(rec2, cw, init, frame2, psi2);
    base[shot] = std::move(rec);
    hit[shot] = std::move(rec2);
  });
  IsthmusResult res;
  res.rounds = rounds;
  res.initial_state = to_string(init);
  res.baseline = summarize("baseline", base, rounds);
  res.injected = summarize("injected", hit, rounds);
  const int first = opts.injection_round + 1, last = opts.injection_round + opts.window;
  window_statistics(res.injected, res.baseline, first, last);
  window_statistics(res.baseline, res.baseline, first, last);
  return res;
}

nlohmann::json LossProbeResult::to_json() const {
  return {{"baseline", baseline.to_json()},
          {"injected", injected.to_json()},
          {"p_one_within_window_baseline", p_one_within_window_baseline},
          {"p_one_within_window_injected", p_one_within_window_injected},
          {"fidelity_baseline", fidelity_baseline},
          {"fidelity_injected", fidelity_injected}};
}

LossProbeResult photon_loss_signature(const CodeSpec& code, const LossProbeOptions& opts) {
  const std::vector<int> dims = resolve_mode_dims(code, opts.mode_dims);
  const SpaceLayout layout = SpaceLayout::with_aux(dims);
  const CodeWords cw = construct_codewords(code, layout.oscillator_part());
  if (opts.loss_round < 0 || opts.window < 1 || opts.shots < 1 || opts.recovery_rounds < 0) {
    throw Error(ErrorKind::kInvalidArgument, "lossprobe: invalid round/window/shot counts");
  }
  int rounds = opts.loss_round + std::max(opts.window, opts.recovery_rounds);
  if (rounds % 2) ++rounds;
  const std::vector<int> sched = sbs_schedule(code, rounds, opts.repeat);
  SbsEngine engine(code, layout, opts.background, CompiledCircuit::Target::kTrajectory);
  const CompiledCircuit loss(
      Circuit{layout, {GateStep{Jump{JumpKind::kPhotonLoss, 0}, 0.0, "photon_loss"}}},
      std::nullopt, CompiledCircuit::Target::kTrajectory);
  const QuantumState start = with_ground_aux(cw.logical(opts.initial));

  auto run_arm = [&](bool inject, std::uint64_t salt) {
    std::vector<TrajectoryRecord> recs(opts.shots);
    parallel_for(opts.shots, [&](int shot) {
      CounterRng rng(CounterRng::derive(opts.seed ^ salt, shot));
      QuantumState psi = start;
      TrajectoryRecord rec;
      ShiftFrame frame(code);
      for (int r = 0; r < rounds; ++r) {
        if (inject && r == opts.loss_round) loss.run(psi, rng, &rec.trace);
        const RunRecord rr = engine.round(sched[r]).run(psi, rng, &rec.trace);
        rec.outcomes.push_back(rr.outcomes.front());
        frame.record(sched[r]);
      }
      finish_decode(rec, cw, opts.initial, frame, psi);
      recs[shot] = std::move(rec);
    });
    return recs;
  };
  LossProbeResult res;
  res.baseline_records = run_arm(false, 0);
  if (opts.inject) res.injected_records = run_arm(true, 0);
  auto within = [&](const std::vector<TrajectoryRecord>& recs) {
    double hits = 0;
    for (const auto& r : recs) {
      bool any = false;
      for (int k = opts.loss_round; k < opts.loss_round + opts.window && k < rounds; ++k) {
        any = any || r.outcomes[k] == 1;
      }
      hits += any;
    }
    return recs.empty() ? 0.0 : hits / recs.size();
  };
  res.baseline = summarize("baseline", res.baseline_records, rounds);
  res.p_one_within_window_baseline = within(res.baseline_records);
  res.fidelity_baseline = 1.0 - res.baseline.flip_probability;
  if (opts.inject) {
    res.injected = summarize("injected", res.injected_records, rounds);
    res.p_one_within_window_injected = within(res.injected_records);
    res.fidelity_injected = 1.0 - res.injected.flip_probability;
    window_statistics(res.injected, res.baseline, opts.loss_round,
                      opts.loss_round + opts.window - 1);
  }
  return res;
}

// ------------------------------------------------------------ post-selection

std::string PostSelectionStrategy::name() const {
  if (kind == Kind::kErasureLimit) return "erasure-limit";
  return "window-threshold(w=" + std::to_string(window) + ",k=" + std::to_string(threshold) + ")";
}

nlohmann::json PostSelectionReport::to_json() const {
  return {{"strategy", strategy},
          {"retained_fraction", retained_fraction},
          {"conditional_fidelity", degenerate ? nlohmann::json(nullptr)
                                              : nlohmann::json(conditional_fidelity)},
          {"unconditional_fidelity", unconditional_fidelity},
          {"degenerate", degenerate},
          {"retained", retained},
          {"total", total}};
}

PostSelectionReport post_selection_analysis(const std::vector<TrajectoryRecord>& records,
                                            const PostSelectionStrategy& st) {
  if (st.kind == PostSelectionStrategy::Kind::kWindowThreshold &&
      (st.window < 1 || st.threshold < 1)) {
    throw Error(ErrorKind::kInvalidArgument, "window-threshold needs w >= 1 and k >= 1");
  }
  PostSelectionReport rep;
  rep.strategy = st.name();
  rep.total = static_cast<int>(records.size());
  double all = 0.0, kept = 0.0;
  for (const auto& r : records) {
    const int last = st.last_round < 0 ? static_cast<int>(r.outcomes.size()) - 1
                                       : std::min(st.last_round, static_cast<int>(r.outcomes.size()) - 1);
    bool discard = false;
    if (st.kind == PostSelectionStrategy::Kind::kErasureLimit) {
      for (int k = st.first_round; k <= last && !discard; ++k) discard = r.outcomes[k] == 1;
    } else {
      int ones = 0;
      for (int k = st.first_round; k <= last && !discard; ++k) {
        ones += r.outcomes[k];
        if (k - st.window >= st.first_round) ones -= r.outcomes[k - st.window];
        discard = ones >= st.threshold;
      }
    }
    all += r.fidelity;
    if (!discard) {
      kept += r.fidelity;
      ++rep.retained;
    }
  }
  rep.unconditional_fidelity = rep.total ? all / rep.total : 0.0;
  rep.retained_fraction = rep.total ? static_cast<double>(rep.retained) / rep.total : 0.0;
  rep.degenerate = rep.retained == 0;
  rep.conditional_fidelity = rep.degenerate ? 0.0 : kept / rep.retained;
  return rep;
}

nlohmann::json records_to_json(const std::vector<TrajectoryRecord>& records) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : records) a.push_back({{"outcomes", r.outcomes}, {"fidelity", r.fidelity}});
  return a;
}

std::vector<TrajectoryRecord> records_from_json(const nlohmann::json& j) {
  std::vector<TrajectoryRecord> out;
  for (const auto& e : j) {
    TrajectoryRecord r;
    r.outcomes = e.at("outcomes").get<std::vector<int>>();
    r.fidelity = e.at("fidelity").get<double>();
    for (size_t k = 0; k < r.outcomes.size(); ++k) {
      r.trace.append(TraceEntry{static_cast<int>(k), "", r.outcomes[k], ""});
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gridsim
