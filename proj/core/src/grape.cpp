// Copyright 2026 The EQSim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqs/grape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

namespace eqs {

namespace {

struct SegmentSpectrum {
  CMatrix vectors;
  Eigen::VectorXd values;
};

SegmentSpectrum diagonalize(const Eigen::VectorXd& energies, const std::vector<CMatrix>& controls,
                            const RMatrix& amplitudes, Eigen::Index k) {
  CMatrix h = energies.cast<Complex>().asDiagonal();
  for (std::size_t c = 0; c < controls.size(); ++c) {
    const double u = amplitudes(k, static_cast<Eigen::Index>(c));
    if (u != 0.0) h += u * controls[c];
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  return {solver.eigenvectors(), solver.eigenvalues()};
}

CMatrix propagator(const SegmentSpectrum& s, double dt) {
  CVector phases(s.values.size());
  for (Eigen::Index j = 0; j < s.values.size(); ++j) phases(j) = std::polar(1.0, -s.values(j) * dt);
  return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

// Divided differences of f(x) = exp(-i x dt) at the segment eigenvalues,
// written so that nearly degenerate pairs stay accurate.
CMatrix divided_differences(const Eigen::VectorXd& lambda, double dt) {
  const Eigen::Index d = lambda.size();
  CMatrix phi(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = 0; l < d; ++l) {
      const double mean = 0.5 * (lambda(j) + lambda(l));
      const double half_gap = 0.5 * (lambda(j) - lambda(l)) * dt;
      const double sinc = std::abs(half_gap) < 1e-8 ? 1.0 - half_gap * half_gap / 6.0 : std::sin(half_gap) / half_gap;
      phi(j, l) = Complex(0.0, -dt) * std::polar(1.0, -mean * dt) * sinc;
    }
  }
  return phi;
}

void require_matching(const ControlPulse& pulse, const SpinSystem& sys) {
  if (!(pulse.dt_s >= 0.0) || !std::isfinite(pulse.dt_s)) throw std::invalid_argument("pulse dt must be >= 0");
  if (pulse.amplitudes.cols() % 2 != 0) throw std::invalid_argument("pulse needs (x, y) column pairs");
  if (!pulse.amplitudes.allFinite()) throw std::invalid_argument("pulse has non-finite amplitudes");
  const std::size_t expected = pulse.mode == ControlMode::kGlobal ? 1 : sys.size();
  if (pulse.segments() > 0 && pulse.channels() != expected) {
    throw std::invalid_argument("pulse channel count does not match the spin system");
  }
  if (!pulse.weights.empty() && pulse.weights.size() != sys.size()) {
    throw std::invalid_argument("pulse weights must have one entry per spin");
  }
}

std::string format_exact(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

ControlPulse ControlPulse::zeros(ControlMode mode, Eigen::Index segments, double dt_s, std::size_t spins) {
  ControlPulse p;
  p.dt_s = dt_s;
  p.mode = mode;
  const Eigen::Index channels = mode == ControlMode::kGlobal ? 1 : static_cast<Eigen::Index>(spins);
  p.amplitudes = RMatrix::Zero(segments, 2 * channels);
  return p;
}

std::vector<CMatrix> control_operators(const ControlPulse& pulse, const SpinSystem& sys) {
  const std::size_t n = sys.size();
  const CMatrix sx = 0.5 * letter_matrix('X');
  const CMatrix sy = 0.5 * letter_matrix('Y');
  std::vector<CMatrix> ops;
  if (pulse.mode == ControlMode::kGlobal) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMatrix hx = CMatrix::Zero(d, d);
    CMatrix hy = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = pulse.weights.empty() ? 1.0 : pulse.weights[j];
      hx += w * embed_single(sx, j, n);
      hy += w * embed_single(sy, j, n);
    }
    ops.push_back(std::move(hx));
    ops.push_back(std::move(hy));
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      ops.push_back(embed_single(sx, j, n));
      ops.push_back(embed_single(sy, j, n));
    }
  }
  return ops;
}

std::vector<UnitaryMatrix> segment_propagators(const ControlPulse& pulse, const SpinSystem& sys) {
  require_matching(pulse, sys);
  const Eigen::VectorXd energies = internal_energies(sys);
  const auto controls = control_operators(pulse, sys);
  std::vector<UnitaryMatrix> out;
  out.reserve(static_cast<std::size_t>(pulse.segments()));
  for (Eigen::Index k = 0; k < pulse.segments(); ++k) {
    out.emplace_back(propagator(diagonalize(energies, controls, pulse.amplitudes, k), pulse.dt_s));
  }
  return out;
}

UnitaryMatrix pulse_to_unitary(const ControlPulse& pulse, const SpinSystem& sys) {
  const Eigen::Index d = Eigen::Index{1} << sys.size();
  CMatrix u = CMatrix::Identity(d, d);
  for (const UnitaryMatrix& step : segment_propagators(pulse, sys)) u = step.matrix() * u;
  return UnitaryMatrix(std::move(u));
}

double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& target) {
  if (u.dimension() != target.dimension()) throw std::invalid_argument("fidelity: dimension mismatch");
  return phase_invariant_overlap(target.matrix(), u.matrix());
}

// GrapeTarget

GrapeTarget::GrapeTarget(UnitaryMatrix target)
    : target_(std::move(target)),
      inputs_(CMatrix::Identity(target_.dimension(), target_.dimension())),
      outputs_(target_.matrix()) {}

GrapeTarget::GrapeTarget(UnitaryMatrix target, CMatrix input_basis)
    : target_(std::move(target)), inputs_(std::move(input_basis)) {
  if (inputs_.rows() != target_.dimension() || inputs_.cols() < 1 || inputs_.cols() > inputs_.rows()) {
    throw std::invalid_argument("GrapeTarget: input basis has the wrong shape");
  }
  const CMatrix gram = inputs_.adjoint() * inputs_;
  if ((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("GrapeTarget: input basis is not orthonormal");
  }
  outputs_ = target_.matrix() * inputs_;
}

double GrapeTarget::fidelity(const CMatrix& u) const {
  if (u.rows() != target_.dimension() || u.cols() != target_.dimension()) {
    throw std::invalid_argument("GrapeTarget::fidelity: dimension mismatch");
  }
  return std::abs((outputs_.adjoint() * u * inputs_).trace()) / static_cast<double>(inputs_.cols());
}

// Gradient

FidelityGradient fidelity_and_gradient(const ControlPulse& pulse, const SpinSystem& sys,
                                       const GrapeTarget& target) {
  require_matching(pulse, sys);
  if (target.num_qubits() != sys.size()) throw std::invalid_argument("GRAPE target does not match the register");
  const Eigen::VectorXd energies = internal_energies(sys);
  const auto controls = control_operators(pulse, sys);
  const Eigen::Index n_seg = pulse.segments();
  const auto m = static_cast<double>(target.subspace_dimension());

  std::vector<SegmentSpectrum> spectra;
  std::vector<CMatrix> props;
  spectra.reserve(static_cast<std::size_t>(n_seg));
  props.reserve(static_cast<std::size_t>(n_seg));
  // forward[k] = U_k ... U_1 Q, forward[0] = Q.
  std::vector<CMatrix> forward;
  forward.reserve(static_cast<std::size_t>(n_seg) + 1);
  forward.push_back(target.input_basis());
  for (Eigen::Index k = 0; k < n_seg; ++k) {
    spectra.push_back(diagonalize(energies, controls, pulse.amplitudes, k));
    props.push_back(propagator(spectra.back(), pulse.dt_s));
    forward.push_back(props.back() * forward.back());
  }
  const Complex z = (target.output_basis().adjoint() * forward.back()).trace();

  FidelityGradient out;
  out.fidelity = std::abs(z) / m;
  out.gradient = RMatrix::Zero(pulse.amplitudes.rows(), pulse.amplitudes.cols());
  if (std::abs(z) == 0.0 || n_seg == 0) return out;

  const Complex zbar_scaled = std::conj(z) / (std::abs(z) * m);
  // backward = W^dagger U_N ... U_{k+1}.
  CMatrix backward = target.output_basis().adjoint();
  for (Eigen::Index k = n_seg - 1; k >= 0; --k) {
    const auto ks = static_cast<std::size_t>(k);
    const SegmentSpectrum& s = spectra[ks];
    const CMatrix& v = s.vectors;
    const CMatrix mixed = v.adjoint() * (forward[ks] * backward) * v;
    const CMatrix phi = divided_differences(s.values, pulse.dt_s);
    const CMatrix weight = mixed.transpose().cwiseProduct(phi);
    for (std::size_t c = 0; c < controls.size(); ++c) {
      const CMatrix hc = v.adjoint() * controls[c] * v;
      const Complex dz = weight.cwiseProduct(hc).sum();
      out.gradient(k, static_cast<Eigen::Index>(c)) = (zbar_scaled * dz).real();
    }
    backward = backward * props[ks];
  }
  return out;
}

RMatrix gradient(const ControlPulse& pulse, const SpinSystem& sys, const GrapeTarget& target) {
  return fidelity_and_gradient(pulse, sys, target).gradient;
}

// Optimizer

void OptimizerConfig::validate() const {
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0)) throw std::invalid_argument("target fidelity must be in (0, 1]");
  if (!(pulse_width_s >= 0.0)) throw std::invalid_argument("pulse width must be >= 0");
  if (!(segment_dt_s > 0.0)) throw std::invalid_argument("segment dt must be positive");
  if (!(amplitude_bound > 0.0)) throw std::invalid_argument("amplitude bound must be positive");
  if (max_iterations < 0 || restarts < 1 || lbfgs_memory < 1) throw std::invalid_argument("bad iteration settings");
  if (!(initial_scale >= 0.0 && initial_scale <= 1.0)) throw std::invalid_argument("initial scale must be in [0, 1]");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial step must be positive");
}

namespace {

// One seeded trajectory in normalized variables x = u / bound, x in [-1, 1].
class Trajectory {
 public:
  Trajectory(const GrapeTarget& target, const SpinSystem& sys, const OptimizerConfig& cfg, ControlPulse start)
      : target_(target), sys_(sys), cfg_(cfg), pulse_(std::move(start)) {}

  OptimizationResult run() {
    const double bound = cfg_.amplitude_bound;
    Eigen::VectorXd x = flatten(pulse_.amplitudes) / bound;
    auto [f, g] = evaluate(x);
    OptimizationResult result;
    result.history.push_back(f);
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y) pairs
    int it = 0;
    for (; it < cfg_.max_iterations && f < cfg_.target_fidelity; ++it) {
      Eigen::VectorXd dir = cfg_.use_lbfgs ? lbfgs_direction(g, memory) : g;
      if (memory.empty() || dir.dot(g) <= 0.0) {
        memory.clear();
        const double gmax = g.cwiseAbs().maxCoeff();
        if (gmax == 0.0) break;
        dir = g * (cfg_.initial_step / gmax);
      }
      bool accepted = false;
      double step = 1.0;
      for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
        const Eigen::VectorXd trial = (x + step * dir).cwiseMax(-1.0).cwiseMin(1.0);
        const double predicted = g.dot(trial - x);
        if (predicted <= 0.0) continue;
        auto [f_new, g_new] = evaluate(trial);
        if (f_new >= f + 1e-4 * predicted) {
          const Eigen::VectorXd s = trial - x;
          const Eigen::VectorXd y = g - g_new;  // gradient change of -f
          if (s.dot(y) > 1e-12 * s.squaredNorm()) {
            memory.emplace_back(s, y);
            if (static_cast<int>(memory.size()) > cfg_.lbfgs_memory) memory.pop_front();
          }
          x = trial;
          f = f_new;
          g = std::move(g_new);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (memory.empty()) break;
        memory.clear();
        continue;
      }
      result.history.push_back(f);
      const std::size_t h = result.history.size();
      if (h > 150 && result.history[h - 1] - result.history[h - 151] < 1e-6) break;
    }
    pulse_.amplitudes = unflatten(x) * bound;
    result.pulse = pulse_;
    result.fidelity = f;
    result.iterations = it;
    result.converged = f >= cfg_.target_fidelity;
    return result;
  }

 private:
  Eigen::VectorXd flatten(const RMatrix& m) const { return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()); }
  RMatrix unflatten(const Eigen::VectorXd& v) const {
    return Eigen::Map<const RMatrix>(v.data(), pulse_.amplitudes.rows(), pulse_.amplitudes.cols());
  }

  std::pair<double, Eigen::VectorXd> evaluate(const Eigen::VectorXd& x) {
    pulse_.amplitudes = unflatten(x) * cfg_.amplitude_bound;
    FidelityGradient fg = fidelity_and_gradient(pulse_, sys_, target_);
    return {fg.fidelity, flatten(fg.gradient) * cfg_.amplitude_bound};
  }

  // Two-loop recursion; returns an ascent direction approximating H^{-1} g.
  static Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& g,
                                         const std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& memory) {
    Eigen::VectorXd q = g;
    if (memory.empty()) return q;
    std::vector<double> alpha(memory.size());
    for (std::size_t i = memory.size(); i-- > 0;) {
      const auto& [s, y] = memory[i];
      alpha[i] = s.dot(q) / y.dot(s);
      q -= alpha[i] * y;
    }
    const auto& [s_last, y_last] = memory.back();
    q *= s_last.dot(y_last) / y_last.squaredNorm();
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, y] = memory[i];
      const double beta = y.dot(q) / y.dot(s);
      q += (alpha[i] - beta) * s;
    }
    return q;
  }

  const GrapeTarget& target_;
  const SpinSystem& sys_;
  const OptimizerConfig& cfg_;
  ControlPulse pulse_;
};

}  // namespace

OptimizationResult optimize(const GrapeTarget& target, const SpinSystem& sys, const OptimizerConfig& cfg,
                            const std::optional<ControlPulse>& initial_guess) {
  cfg.validate();
  sys.validate();
  if (target.num_qubits() != sys.size()) throw std::invalid_argument("GRAPE target does not match the register");
  const auto segments = static_cast<Eigen::Index>(std::llround(cfg.pulse_width_s / cfg.segment_dt_s));
  const double dt = segments > 0 ? cfg.pulse_width_s / static_cast<double>(segments) : cfg.segment_dt_s;

  OptimizationResult best;
  best.fidelity = -1.0;
  for (int r = 0; r < cfg.restarts; ++r) {
    ControlPulse start = ControlPulse::zeros(cfg.mode, segments, dt, sys.size());
    if (r == 0 && initial_guess) {
      if (initial_guess->amplitudes.rows() != start.amplitudes.rows() ||
          initial_guess->amplitudes.cols() != start.amplitudes.cols()) {
        throw std::invalid_argument("initial guess does not match the configured pulse shape");
      }
      start.amplitudes = initial_guess->amplitudes.cwiseMax(-cfg.amplitude_bound).cwiseMin(cfg.amplitude_bound);
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      // Bit-exact across standard libraries, unlike std::uniform_real_distribution.
      for (Eigen::Index i = 0; i < start.amplitudes.size(); ++i) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        start.amplitudes.data()[i] = (2.0 * unit - 1.0) * cfg.initial_scale * cfg.amplitude_bound;
      }
    }
    OptimizationResult result = Trajectory(target, sys, cfg, std::move(start)).run();
    result.restart = r;
    const bool done = result.converged;
    if (result.fidelity > best.fidelity) best = std::move(result);
    if (done) return best;
  }
  std::ostringstream msg;
  msg << "GRAPE did not reach fidelity " << cfg.target_fidelity << " after " << cfg.restarts
      << " restarts (best " << best.fidelity << ")";
  throw ConvergenceError(msg.str(), std::move(best));
}

// Pulse files

void write_pulse(std::ostream& out, const ControlPulse& pulse) {
  out << "# eqsim control pulse\n";
  out << "# dt_s=" << format_exact(pulse.dt_s) << " segments=" << pulse.segments()
      << " duration_s=" << format_exact(pulse.duration_s())
      << " mode=" << (pulse.mode == ControlMode::kGlobal ? "global" : "selective") << "\n";
  if (!pulse.weights.empty()) {
    out << "# weights=";
    for (std::size_t j = 0; j < pulse.weights.size(); ++j) out << (j ? "," : "") << format_exact(pulse.weights[j]);
    out << "\n";
  }
  out << "index";
  if (pulse.channels() == 1) {
    out << ",x_rad_s,y_rad_s";
  } else {
    for (std::size_t c = 0; c < pulse.channels(); ++c) out << ",x" << c << "_rad_s,y" << c << "_rad_s";
  }
  out << "\n";
  for (Eigen::Index k = 0; k < pulse.segments(); ++k) {
    out << k;
    for (Eigen::Index c = 0; c < pulse.amplitudes.cols(); ++c) out << ',' << format_exact(pulse.amplitudes(k, c));
    out << "\n";
  }
}

ControlPulse read_pulse(std::istream& in) {
  ControlPulse pulse;
  std::optional<Eigen::Index> declared_segments;
  bool have_dt = false;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      for (std::string token; fields >> token;) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "dt_s") {
          pulse.dt_s = std::stod(value);
          have_dt = true;
        } else if (key == "segments") {
          declared_segments = std::stoll(value);
        } else if (key == "mode") {
          if (value == "global") {
            pulse.mode = ControlMode::kGlobal;
          } else if (value == "selective") {
            pulse.mode = ControlMode::kSelective;
          } else {
            throw std::invalid_argument("pulse file: unknown mode '" + value + "'");
          }
        } else if (key == "weights") {
          std::istringstream list(value);
          for (std::string w; std::getline(list, w, ',');) pulse.weights.push_back(std::stod(w));
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("index", 0) != 0) throw std::invalid_argument("pulse file: missing column header");
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::vector<double> row;
    std::string cell;
    std::getline(fields, cell, ',');  // segment index
    if (std::stoll(cell) != static_cast<long long>(rows.size())) {
      throw std::invalid_argument("pulse file: segment indices must be consecutive from 0");
    }
    while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
    if (row.empty() || row.size() % 2 != 0 || (!rows.empty() && row.size() != rows.front().size())) {
      throw std::invalid_argument("pulse file: inconsistent amplitude columns");
    }
    rows.push_back(std::move(row));
  }
  if (!have_dt) throw std::invalid_argument("pulse file: missing dt_s");
  if (declared_segments && *declared_segments != static_cast<Eigen::Index>(rows.size())) {
    throw std::invalid_argument("pulse file: segment count does not match header");
  }
  const Eigen::Index cols = rows.empty() ? 2 : static_cast<Eigen::Index>(rows.front().size());
  pulse.amplitudes = RMatrix::Zero(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (Eigen::Index c = 0; c < cols; ++c) pulse.amplitudes(static_cast<Eigen::Index>(k), c) = rows[k][static_cast<std::size_t>(c)];
  }
  return pulse;
}

}  // namespace eqs
