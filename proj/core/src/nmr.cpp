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

#include "eqs/nmr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eqs {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

double axis_phase(PulseAxis axis) {
  switch (axis) {
    case PulseAxis::kX: return 0.0;
    case PulseAxis::kY: return kPi / 2;
    case PulseAxis::kMinusX: return kPi;
    case PulseAxis::kMinusY: return 3 * kPi / 2;
  }
  throw std::invalid_argument("unknown pulse axis");
}

const char* axis_name(PulseAxis axis) {
  switch (axis) {
    case PulseAxis::kX: return "x";
    case PulseAxis::kY: return "y";
    case PulseAxis::kMinusX: return "-x";
    case PulseAxis::kMinusY: return "-y";
  }
  throw std::invalid_argument("unknown pulse axis");
}

PulseAxis parse_axis(std::string_view s) {
  if (s == "x") return PulseAxis::kX;
  if (s == "y") return PulseAxis::kY;
  if (s == "-x") return PulseAxis::kMinusX;
  if (s == "-y") return PulseAxis::kMinusY;
  throw std::invalid_argument("pulse sequence: unknown axis '" + std::string(s) + "'");
}

CMatrix hard_pulse_matrix(const HardPulse& p, std::size_t n) {
  const double phi = axis_phase(p.axis);
  const CMatrix axis = std::cos(phi) * letter_matrix('X') + std::sin(phi) * letter_matrix('Y');
  const CMatrix single = std::cos(p.angle / 2) * CMatrix::Identity(2, 2) - Complex(0, std::sin(p.angle / 2)) * axis;
  CMatrix u = CMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const bool hit = std::find(p.spins.begin(), p.spins.end(), q) != p.spins.end();
    u = kron(u, hit ? single : CMatrix::Identity(2, 2));
  }
  return u;
}

// Gamma_jl = sum of 1/T2 over the spins where j and l differ.
RMatrix dephasing_rates(const SpinSystem& sys) {
  const std::size_t n = sys.size();
  const Eigen::Index d = Eigen::Index{1} << n;
  RMatrix gamma = RMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index l = 0; l < d; ++l) {
      const auto diff = static_cast<unsigned>(j ^ l);
      for (std::size_t k = 0; k < n; ++k) {
        if ((diff >> (n - 1 - k)) & 1U) gamma(j, l) += 1.0 / sys.t2_s[k];
      }
    }
  }
  return gamma;
}

class Evolver {
 public:
  Evolver(const SpinSystem& sys, bool dephase)
      : sys_(sys), energies_(internal_energies(sys)), dephase_(dephase) {
    if (dephase_) gamma_ = dephasing_rates(sys);
  }

  void apply(CMatrix& rho, const PulseSegment& seg) const {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, HardPulse>) {
            const CMatrix u = hard_pulse_matrix(s, sys_.size());
            rho = u * rho * u.adjoint();
          } else if constexpr (std::is_same_v<T, Delay>) {
            free_evolution(rho, s.duration_s);
          } else {
            for (const UnitaryMatrix& u : segment_propagators(*s.pulse, sys_)) {
              rho = u.matrix() * rho * u.matrix().adjoint();
              dephase(rho, s.pulse->dt_s);
            }
          }
        },
        seg);
  }

 private:
  void free_evolution(CMatrix& rho, double tau) const {
    for (Eigen::Index j = 0; j < rho.rows(); ++j) {
      for (Eigen::Index l = 0; l < rho.cols(); ++l) {
        rho(j, l) *= std::polar(1.0, -(energies_(j) - energies_(l)) * tau);
      }
    }
    dephase(rho, tau);
  }

  void dephase(CMatrix& rho, double tau) const {
    if (!dephase_) return;
    rho = rho.cwiseProduct((-tau * gamma_).array().exp().matrix().cast<Complex>());
  }

  const SpinSystem& sys_;
  Eigen::VectorXd energies_;
  bool dephase_;
  RMatrix gamma_;
};

// Walsh function w_r(i) = (-1)^popcount(r & i).
int walsh(unsigned r, unsigned i) { return std::popcount(r & i) % 2 == 0 ? 1 : -1; }

}  // namespace

void NoiseModel::validate() const {
  if (!(polarization > 0.0 && polarization <= 1.0)) throw std::invalid_argument("polarization must be in (0, 1]");
  if (!(pps_infidelity >= 0.0 && pps_infidelity < 1.0)) {
    throw std::invalid_argument("PPS infidelity must be in [0, 1)");
  }
}

DensityMatrix thermal_state(const SpinSystem& sys, double epsilon) {
  sys.validate();
  const std::size_t n = sys.size();
  const double d = std::ldexp(1.0, static_cast<int>(n));
  if (!(epsilon >= 0.0) || epsilon * static_cast<double>(n) > 1.0 / d) {
    throw std::invalid_argument("thermal_state: epsilon must be in [0, 2^-n / n]");
  }
  CMatrix rho = CMatrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) / d;
  for (std::size_t j = 0; j < n; ++j) rho += epsilon * embed_single(letter_matrix('Z'), j, n);
  return DensityMatrix(std::move(rho));
}

DensityMatrix prepare_pps(double epsilon, std::size_t num_qubits, double infidelity) {
  NoiseModel{epsilon, infidelity, false}.validate();
  if (num_qubits < 1 || num_qubits > kMaxQubits) throw std::invalid_argument("prepare_pps: bad qubit count");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  Eigen::VectorXd target = Eigen::VectorXd::Constant(d, infidelity / static_cast<double>(d - 1));
  target(0) = 1.0 - infidelity;
  const Eigen::VectorXd diag = Eigen::VectorXd::Constant(d, (1.0 - epsilon) / static_cast<double>(d)) + epsilon * target;
  return DensityMatrix(diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

void validate_sequence(const PulseSequence& seq, const SpinSystem& sys) {
  for (const PulseSegment& seg : seq) {
    if (const auto* p = std::get_if<HardPulse>(&seg)) {
      if (!(std::abs(p->angle) < 2 * kPi)) throw std::invalid_argument("hard pulse flip angle must be in (-2 pi, 2 pi)");
      for (std::size_t s : p->spins) {
        if (s >= sys.size()) throw std::invalid_argument("hard pulse addresses an unknown spin");
      }
    } else if (const auto* dl = std::get_if<Delay>(&seg)) {
      if (!(dl->duration_s >= 0.0) || !std::isfinite(dl->duration_s)) {
        throw std::invalid_argument("delay must be finite and >= 0");
      }
    } else if (const auto* sp = std::get_if<ShapedPulse>(&seg)) {
      if (!sp->pulse) throw std::invalid_argument("shaped pulse '" + sp->label + "' has no waveform");
    }
  }
}

DensityMatrix simulate_sequence(const DensityMatrix& rho, const PulseSequence& seq, const SpinSystem& sys,
                                const NoiseModel* noise) {
  sys.validate();
  if (rho.num_qubits() != sys.size()) throw std::invalid_argument("simulate_sequence: register size mismatch");
  validate_sequence(seq, sys);
  if (noise) noise->validate();
  const Evolver evolver(sys, noise && noise->t2_dephasing);
  CMatrix m = rho.matrix();
  for (const PulseSegment& seg : seq) evolver.apply(m, seg);
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

UnitaryMatrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys) {
  sys.validate();
  validate_sequence(seq, sys);
  const std::size_t n = sys.size();
  const Eigen::VectorXd energies = internal_energies(sys);
  CMatrix u = CMatrix::Identity(energies.size(), energies.size());
  for (const PulseSegment& seg : seq) {
    if (const auto* p = std::get_if<HardPulse>(&seg)) {
      u = hard_pulse_matrix(*p, n) * u;
    } else if (const auto* dl = std::get_if<Delay>(&seg)) {
      CVector phases(energies.size());
      for (Eigen::Index j = 0; j < energies.size(); ++j) phases(j) = std::polar(1.0, -energies(j) * dl->duration_s);
      u = phases.asDiagonal() * u;
    } else {
      u = pulse_to_unitary(*std::get<ShapedPulse>(seg).pulse, sys).matrix() * u;
    }
  }
  return UnitaryMatrix(std::move(u));
}

PulseSequence refocused_zz(std::size_t a, std::size_t b, double phase, const SpinSystem& sys) {
  sys.validate();
  const std::size_t n = sys.size();
  if (a >= n || b >= n) throw std::invalid_argument("refocused_zz: spin index out of range");
  if (a == b) throw std::invalid_argument("refocused_zz: needs two distinct spins");
  const double j = sys.coupling_hz(a, b);
  if (j == 0.0) throw std::invalid_argument("refocused_zz: spins are not coupled");
  PulseSequence seq;
  if (phase == 0.0) return seq;

  // Spins a and b follow w_1; spectators follow w_2, w_3, ...
  std::vector<unsigned> pattern(n, 0);
  pattern[a] = pattern[b] = 1;
  unsigned next = 2;
  for (std::size_t s = 0; s < n; ++s) {
    if (s != a && s != b) pattern[s] = next++;
  }
  unsigned intervals = 2;
  while (intervals <= next - 1) intervals *= 2;

  const double tau = std::abs(phase / (0.5 * kPi * j));
  const bool flip = phase / j < 0.0;
  const double slot = tau / intervals;
  if (flip) seq.push_back(HardPulse{{a}, PulseAxis::kX, kPi});
  for (unsigned i = 0; i < intervals; ++i) {
    if (i > 0) {
      HardPulse refocus{{}, PulseAxis::kX, kPi};
      for (std::size_t s = 0; s < n; ++s) {
        if (walsh(pattern[s], i) != walsh(pattern[s], i - 1)) refocus.spins.push_back(s);
      }
      if (!refocus.spins.empty()) seq.push_back(std::move(refocus));
    }
    seq.push_back(Delay{slot});
  }
  HardPulse restore{{}, PulseAxis::kX, kPi};
  for (std::size_t s = 0; s < n; ++s) {
    if (walsh(pattern[s], intervals - 1) < 0) restore.spins.push_back(s);
  }
  if (!restore.spins.empty()) seq.push_back(std::move(restore));
  if (flip) seq.push_back(HardPulse{{a}, PulseAxis::kX, kPi});
  return seq;
}

PulseSequence refocused_jcoupling(std::size_t a, std::size_t b, const SpinSystem& sys) {
  return refocused_zz(a, b, kPi / 4, sys);
}

SpinSystem logical_register(const Circuit& circuit, const SpinSystem& molecule) {
  if (circuit.num_qubits() > molecule.size()) throw std::invalid_argument("circuit is larger than the molecule");
  const std::vector<std::size_t> map = circuit.widened(molecule.size()).physical_map();
  return molecule.subsystem(map);
}

PulseSequence compile_circuit(const Circuit& circuit, const SpinSystem& sys) {
  if (circuit.num_qubits() != sys.size()) throw std::invalid_argument("compile_circuit: register size mismatch");
  const Circuit native = to_native_gates(circuit, sys.j_hz);
  PulseSequence seq;
  for (const Gate& g : native.gates()) {
    if (const auto* r = std::get_if<Rotation>(&g)) {
      if (r->axis == Axis::kZ) throw std::logic_error("compile_circuit: z rotation survived expansion");
      const double angle = std::remainder(r->angle, 2 * kPi);
      if (angle == 0.0) continue;
      seq.push_back(HardPulse{{r->qubit}, r->axis == Axis::kX ? PulseAxis::kX : PulseAxis::kY, angle});
    } else if (const auto* jz = std::get_if<JEvolution>(&g)) {
      const PulseSequence part = refocused_zz(jz->a, jz->b, 0.5 * kPi * jz->coupling_hz * jz->duration_s, sys);
      seq.insert(seq.end(), part.begin(), part.end());
    } else if (std::holds_alternative<Cnot>(g)) {
      throw std::logic_error("compile_circuit: CNOT survived decomposition");
    }
  }
  return seq;
}

double read_accessible(const DensityMatrix& rho, const ReadoutPlan& plan, double epsilon) {
  if (!is_fid_accessible(plan.measured_word)) {
    throw std::invalid_argument("'" + plan.measured_word + "' is not FID accessible");
  }
  if (plan.measured_word.size() != rho.num_qubits()) throw std::invalid_argument("readout plan size mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("polarization must be positive");
  return plan.sign * expectation(rho, word_operator(plan.measured_word)) / epsilon;
}

double measure_fid_observable(const DensityMatrix& rho, const ReadoutPlan& plan, double epsilon) {
  if (!is_fid_accessible(plan.measured_word)) {
    throw std::invalid_argument("'" + plan.measured_word + "' is not FID accessible");
  }
  if (plan.rotation_word.size() != rho.num_qubits()) throw std::invalid_argument("readout plan size mismatch");
  return read_accessible(apply_unitary(readout_unitary(plan.rotation_word), rho), plan, epsilon);
}

std::string to_text(const PulseSequence& seq) {
  std::ostringstream out;
  for (const PulseSegment& seg : seq) {
    if (const auto* p = std::get_if<HardPulse>(&seg)) {
      out << "PULSE ";
      for (std::size_t k = 0; k < p->spins.size(); ++k) out << (k ? "," : "") << p->spins[k];
      out << ' ' << axis_name(p->axis) << ' ' << format_number(p->angle) << '\n';
    } else if (const auto* dl = std::get_if<Delay>(&seg)) {
      out << "DELAY " << format_number(dl->duration_s) << '\n';
    } else {
      out << "SHAPED " << std::get<ShapedPulse>(seg).label << '\n';
    }
  }
  return out.str();
}

PulseSequence parse_sequence(std::string_view text,
                             const std::map<std::string, std::shared_ptr<const ControlPulse>>& library) {
  PulseSequence seq;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind.front() == '#') continue;
    const std::string where = "pulse sequence line " + std::to_string(line_no) + ": ";
    if (kind == "PULSE") {
      std::string spins, axis;
      double angle = 0.0;
      if (!(fields >> spins >> axis >> angle)) throw std::invalid_argument(where + "expected PULSE <spins> <axis> <angle>");
      HardPulse p{{}, parse_axis(axis), angle};
      std::istringstream list(spins);
      for (std::string s; std::getline(list, s, ',');) p.spins.push_back(std::stoul(s));
      seq.push_back(std::move(p));
    } else if (kind == "DELAY") {
      double tau = 0.0;
      if (!(fields >> tau)) throw std::invalid_argument(where + "expected DELAY <seconds>");
      seq.push_back(Delay{tau});
    } else if (kind == "SHAPED") {
      std::string label;
      if (!(fields >> label)) throw std::invalid_argument(where + "expected SHAPED <label>");
      const auto it = library.find(label);
      if (it == library.end()) throw std::invalid_argument(where + "unknown shaped pulse '" + label + "'");
      seq.push_back(ShapedPulse{label, it->second});
    } else {
      throw std::invalid_argument(where + "unknown segment '" + kind + "'");
    }
  }
  return seq;
}

}  // namespace eqs
