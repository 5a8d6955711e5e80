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

#include "eqs/circuits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "eqs/tolerances.hpp"

namespace eqs {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

char axis_letter(Axis axis) {
  switch (axis) {
    case Axis::kX: return 'X';
    case Axis::kY: return 'Y';
    case Axis::kZ: return 'Z';
  }
  return '?';
}

CMatrix readout_letter_matrix(char r) {
  switch (r) {
    case 'I': return CMatrix::Identity(2, 2);
    case 'X': return rotation_matrix(Axis::kX, kPi / 2);
    case 'Y': return rotation_matrix(Axis::kY, kPi / 2);
    case 'y': return rotation_matrix(Axis::kY, -kPi / 2);
    default: throw std::invalid_argument(std::string("unknown readout rotation '") + r + "'");
  }
}

// Sign s with m = s * letter_matrix(letter), or 0 if neither sign matches.
int match_sign(const CMatrix& m, char letter) {
  const CMatrix l = letter_matrix(letter);
  if ((m - l).cwiseAbs().maxCoeff() < tol::kReadoutSign) return 1;
  if ((m + l).cwiseAbs().maxCoeff() < tol::kReadoutSign) return -1;
  return 0;
}

struct LetterChoice {
  char rotation;
  char measured;
  int sign;
};

// Picks the rotation for one qubit. Positive signs are preferred, then the
// order I, X, Y, Y-bar.
std::optional<LetterChoice> choose_rotation(char target, bool observed_qubit) {
  static constexpr std::array<char, 4> kRotations{'I', 'X', 'Y', 'y'};
  const std::string accessible = observed_qubit ? "XY" : "IZ01";
  const CMatrix t = letter_matrix(target);
  for (int wanted_sign : {1, -1}) {
    for (char r : kRotations) {
      const CMatrix u = readout_letter_matrix(r);
      const CMatrix image = u * t * u.adjoint();
      for (char m : accessible) {
        if (match_sign(image, m) == wanted_sign) return LetterChoice{r, m, wanted_sign};
      }
    }
  }
  return std::nullopt;
}

std::size_t parse_index(const std::string& token) {
  std::size_t used = 0;
  const unsigned long value = std::stoul(token, &used);
  if (used != token.size()) throw std::invalid_argument("bad qubit index '" + token + "'");
  return value;
}

double parse_real(const std::string& token) {
  std::size_t used = 0;
  const double value = std::stod(token, &used);
  if (used != token.size() || !std::isfinite(value)) {
    throw std::invalid_argument("bad number '" + token + "'");
  }
  return value;
}

}  // namespace

// Circuit

Circuit::Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("Circuit: register size must be in [1, 8]");
  }
  physical_.resize(num_qubits);
  for (std::size_t k = 0; k < num_qubits; ++k) physical_[k] = k;
}

Circuit& Circuit::add(Gate gate) {
  auto check = [&](std::size_t q) {
    if (q >= num_qubits_) throw std::invalid_argument("gate qubit index out of range");
  };
  std::visit(Overloaded{
                 [&](const Cnot& g) {
                   check(g.control);
                   check(g.target);
                   if (g.control == g.target) throw std::invalid_argument("CNOT control equals target");
                 },
                 [&](const Rotation& g) {
                   check(g.qubit);
                   if (!std::isfinite(g.angle)) throw std::invalid_argument("non-finite rotation angle");
                 },
                 [&](const JEvolution& g) {
                   check(g.a);
                   check(g.b);
                   if (g.a == g.b) throw std::invalid_argument("J evolution on a single qubit");
                   if (!(g.duration_s >= 0.0) || !std::isfinite(g.coupling_hz)) {
                     throw std::invalid_argument("J evolution needs a finite coupling and duration >= 0");
                   }
                 },
                 [](const Barrier&) {},
             },
             gate);
  gates_.push_back(gate);
  return *this;
}

void Circuit::set_physical_map(std::vector<std::size_t> map) {
  if (map.size() != num_qubits_) throw std::invalid_argument("physical map size mismatch");
  std::vector<std::size_t> sorted = map;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("physical map is not injective");
  }
  physical_ = std::move(map);
}

Circuit Circuit::widened(std::size_t num_qubits) const {
  if (num_qubits < num_qubits_) throw std::invalid_argument("widened: cannot shrink a circuit");
  Circuit out(num_qubits);
  for (const Gate& g : gates_) out.add(g);
  std::vector<std::size_t> map = physical_;
  for (std::size_t candidate = 0; map.size() < num_qubits; ++candidate) {
    if (std::find(map.begin(), map.end(), candidate) == map.end()) map.push_back(candidate);
  }
  out.set_physical_map(std::move(map));
  return out;
}

std::size_t Circuit::count_cnots() const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return std::holds_alternative<Cnot>(g); }));
}

// EQS circuits

EqsModel parse_model(std::string_view tag) {
  if (tag == "2q") return EqsModel::kTwoQubit;
  if (tag == "3q") return EqsModel::kThreeQubit;
  throw std::invalid_argument("unknown model tag '" + std::string(tag) + "' (expected 2q or 3q)");
}

std::size_t system_qubits(EqsModel model) { return model == EqsModel::kTwoQubit ? 2 : 3; }

Circuit build_eqs_circuit(EqsModel model, double t, double omega) {
  if (!(t >= 0.0)) throw std::invalid_argument("build_eqs_circuit: negative time");
  const std::size_t n = system_qubits(model) + 1;
  Circuit c(n);
  // CNOT(0 -> k) maps Y_0 to Y_0 X_k, so the sandwich turns R_y on the
  // ancilla into exp(i omega t Y X ... X).
  for (std::size_t k = 1; k < n; ++k) c.add(Cnot{0, k});
  c.add(Rotation{Axis::kY, 0, -2.0 * omega * t});
  for (std::size_t k = n - 1; k >= 1; --k) c.add(Cnot{0, k});
  // Ancilla on C3; work qubits on C4, C2, C1.
  std::vector<std::size_t> map{2, 3, 1, 0};
  map.resize(n);
  c.set_physical_map(std::move(map));
  return c;
}

Circuit simplify_for_zero_input(const Circuit& circuit) {
  Circuit out(circuit.num_qubits());
  out.set_physical_map(circuit.physical_map());
  // Qubits that may have left |0>.
  std::vector<bool> touched(circuit.num_qubits(), false);
  for (const Gate& g : circuit.gates()) {
    if (const auto* cnot = std::get_if<Cnot>(&g)) {
      if (!touched[cnot->control]) continue;
      touched[cnot->target] = true;
    } else if (const auto* rot = std::get_if<Rotation>(&g)) {
      if (rot->axis != Axis::kZ) touched[rot->qubit] = true;
    }
    out.add(g);
  }
  return out;
}

Circuit decompose_cnot(std::size_t control, std::size_t target, double coupling_hz) {
  if (control == target) throw std::invalid_argument("decompose_cnot: control equals target");
  if (!(coupling_hz != 0.0) || !std::isfinite(coupling_hz)) {
    throw std::invalid_argument("decompose_cnot: coupling must be finite and nonzero");
  }
  Circuit c(std::max(control, target) + 1);
  c.add(Rotation{Axis::kY, target, kPi / 2});
  c.add(JEvolution{control, target, 1.0 / (2.0 * std::abs(coupling_hz)), std::abs(coupling_hz)});
  c.add(Rotation{Axis::kX, target, kPi / 2});
  c.add(Rotation{Axis::kZ, target, -kPi / 2});
  c.add(Rotation{Axis::kZ, control, kPi / 2});
  return c;
}

Circuit expand_z_rotations(const Circuit& circuit) {
  Circuit out(circuit.num_qubits());
  out.set_physical_map(circuit.physical_map());
  for (const Gate& g : circuit.gates()) {
    const auto* rot = std::get_if<Rotation>(&g);
    if (rot == nullptr || rot->axis != Axis::kZ) {
      out.add(g);
      continue;
    }
    out.add(Rotation{Axis::kY, rot->qubit, -kPi / 2});
    out.add(Rotation{Axis::kX, rot->qubit, -rot->angle});
    out.add(Rotation{Axis::kY, rot->qubit, kPi / 2});
  }
  return out;
}

Circuit to_native_gates(const Circuit& circuit, const std::optional<RMatrix>& j_hz) {
  Circuit out(circuit.num_qubits());
  out.set_physical_map(circuit.physical_map());
  for (const Gate& g : circuit.gates()) {
    const auto* cnot = std::get_if<Cnot>(&g);
    if (cnot == nullptr) {
      out.add(g);
      continue;
    }
    double coupling = 1.0;
    if (j_hz) {
      coupling = (*j_hz)(static_cast<Eigen::Index>(cnot->control), static_cast<Eigen::Index>(cnot->target));
    }
    const Circuit native = decompose_cnot(cnot->control, cnot->target, coupling);
    for (const Gate& ng : native.gates()) out.add(ng);
  }
  return expand_z_rotations(out);
}

CMatrix rotation_matrix(Axis axis, double angle) {
  const char letter = axis_letter(axis);
  const CMatrix sigma = letter_matrix(letter);
  return std::cos(angle / 2) * CMatrix::Identity(2, 2) - Complex(0.0, std::sin(angle / 2)) * sigma;
}

UnitaryMatrix gate_unitary(const Gate& gate, std::size_t num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return std::visit(
      Overloaded{
          [&](const Cnot& g) {
            if (g.control >= num_qubits || g.target >= num_qubits) throw std::invalid_argument("gate out of range");
            CMatrix u = CMatrix::Zero(d, d);
            const std::size_t cbit = std::size_t{1} << (num_qubits - 1 - g.control);
            const std::size_t tbit = std::size_t{1} << (num_qubits - 1 - g.target);
            for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
              const std::size_t j = (i & cbit) ? (i ^ tbit) : i;
              u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
            }
            return UnitaryMatrix(std::move(u));
          },
          [&](const Rotation& g) {
            return UnitaryMatrix(embed_single(rotation_matrix(g.axis, g.angle), g.qubit, num_qubits));
          },
          [&](const JEvolution& g) {
            if (g.a >= num_qubits || g.b >= num_qubits) throw std::invalid_argument("gate out of range");
            const double phase = 0.5 * kPi * g.coupling_hz * g.duration_s;
            const std::size_t abit = std::size_t{1} << (num_qubits - 1 - g.a);
            const std::size_t bbit = std::size_t{1} << (num_qubits - 1 - g.b);
            CVector diag(d);
            for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
              const double zz = (((i & abit) != 0) == ((i & bbit) != 0)) ? 1.0 : -1.0;
              diag(static_cast<Eigen::Index>(i)) = std::polar(1.0, -phase * zz);
            }
            return UnitaryMatrix(diag.asDiagonal().toDenseMatrix());
          },
          [&](const Barrier&) { return UnitaryMatrix::identity(num_qubits); },
      },
      gate);
}

UnitaryMatrix circuit_to_unitary(const Circuit& circuit) {
  const Eigen::Index d = Eigen::Index{1} << circuit.num_qubits();
  CMatrix u = CMatrix::Identity(d, d);
  for (const Gate& g : circuit.gates()) {
    u = gate_unitary(g, circuit.num_qubits()).matrix() * u;
  }
  return UnitaryMatrix(std::move(u));
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream out;
  out << "QUBITS " << circuit.num_qubits() << "\n";
  out << "MAP";
  for (std::size_t p : circuit.physical_map()) out << ' ' << p;
  out << "\n";
  for (const Gate& g : circuit.gates()) {
    std::visit(Overloaded{
                   [&](const Cnot& c) { out << "CNOT " << c.control << ' ' << c.target; },
                   [&](const Rotation& r) {
                     out << 'R' << axis_letter(r.axis) << ' ' << r.qubit << ' ' << format_number(r.angle);
                   },
                   [&](const JEvolution& j) {
                     out << "J " << j.a << ' ' << j.b << ' ' << format_number(j.duration_s);
                     const double canonical = 1.0 / (2.0 * j.duration_s);
                     if (std::abs(canonical - j.coupling_hz) > 1e-9 * std::abs(j.coupling_hz)) {
                       out << ' ' << format_number(j.coupling_hz);
                     }
                   },
                   [&](const Barrier&) { out << "BARRIER"; },
               },
               g);
    out << "\n";
  }
  return out.str();
}

Circuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::size_t> declared;
  std::optional<std::vector<std::size_t>> map;
  std::vector<Gate> gates;
  std::size_t max_index = 0;
  int line_no = 0;
  auto note = [&](std::size_t q) { max_index = std::max(max_index, q + 1); };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string s; fields >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    const std::string& op = tok[0];
    auto need = [&](std::size_t count) {
      if (tok.size() != count) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed '" + op + "'");
      }
    };
    if (op == "QUBITS") {
      need(2);
      declared = parse_index(tok[1]);
    } else if (op == "MAP") {
      std::vector<std::size_t> m;
      for (std::size_t k = 1; k < tok.size(); ++k) m.push_back(parse_index(tok[k]));
      map = std::move(m);
    } else if (op == "CNOT") {
      need(3);
      Cnot g{parse_index(tok[1]), parse_index(tok[2])};
      note(g.control);
      note(g.target);
      gates.emplace_back(g);
    } else if (op == "RX" || op == "RY" || op == "RZ") {
      need(3);
      const Axis axis = op == "RX" ? Axis::kX : (op == "RY" ? Axis::kY : Axis::kZ);
      Rotation g{axis, parse_index(tok[1]), parse_real(tok[2])};
      note(g.qubit);
      gates.emplace_back(g);
    } else if (op == "J") {
      if (tok.size() != 4 && tok.size() != 5) need(4);
      JEvolution g{parse_index(tok[1]), parse_index(tok[2]), parse_real(tok[3]), 0.0};
      g.coupling_hz = tok.size() == 5 ? parse_real(tok[4]) : 1.0 / (2.0 * g.duration_s);
      note(g.a);
      note(g.b);
      gates.emplace_back(g);
    } else if (op == "BARRIER") {
      need(1);
      gates.emplace_back(Barrier{});
    } else {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown gate '" + op + "'");
    }
  }
  const std::size_t n = declared.value_or(std::max<std::size_t>(max_index, 1));
  Circuit c(n);
  for (const Gate& g : gates) c.add(g);
  if (map) c.set_physical_map(*map);
  return c;
}

// Readout

bool is_fid_accessible(std::string_view word) {
  if (word.empty() || (word.front() != 'X' && word.front() != 'Y')) return false;
  return std::all_of(word.begin() + 1, word.end(),
                     [](char c) { return c == 'I' || c == 'Z' || c == '0' || c == '1'; });
}

ReadoutPlan plan_readout(const PauliString& target, std::string_view spectator_projector) {
  if (target.coefficient() != 1.0) {
    throw std::invalid_argument("plan_readout: target must have unit coefficient");
  }
  return plan_readout(target.word() + std::string(spectator_projector));
}

ReadoutPlan plan_readout(std::string_view target_word) {
  if (target_word.empty() || target_word.size() > kMaxQubits) {
    throw std::invalid_argument("plan_readout: bad register size");
  }
  ReadoutPlan plan;
  plan.target_word = std::string(target_word);
  for (std::size_t k = 0; k < target_word.size(); ++k) {
    const char letter = target_word[k];
    if (std::string_view("IXYZ01").find(letter) == std::string_view::npos) {
      throw std::invalid_argument(std::string("plan_readout: unknown letter '") + letter + "'");
    }
    const auto choice = choose_rotation(letter, k == 0);
    if (!choice) {
      throw std::invalid_argument("plan_readout: unsupported observable " + plan.target_word +
                                  " (no rotation maps it to an FID-accessible form)");
    }
    plan.rotation_word += choice->rotation;
    plan.measured_word += choice->measured;
    plan.sign *= choice->sign;
  }
  // Cross-check the bookkeeping on the full register.
  const CMatrix r = readout_unitary(plan.rotation_word).matrix();
  const CMatrix pulled_back = r.adjoint() * word_operator(plan.measured_word).matrix() * r;
  const CMatrix expected = plan.sign * word_operator(plan.target_word).matrix();
  if ((pulled_back - expected).cwiseAbs().maxCoeff() > tol::kReadoutSign) {
    throw std::logic_error("plan_readout: sign bookkeeping failed for " + plan.target_word);
  }
  return plan;
}

UnitaryMatrix readout_unitary(std::string_view rotation_word) {
  if (rotation_word.empty()) throw std::invalid_argument("empty rotation word");
  CMatrix u = readout_letter_matrix(rotation_word.front());
  for (std::size_t k = 1; k < rotation_word.size(); ++k) u = kron(u, readout_letter_matrix(rotation_word[k]));
  return UnitaryMatrix(std::move(u));
}

std::string display_rotation_word(std::string_view rotation_word) {
  std::string out;
  for (char c : rotation_word) {
    if (c == 'y') {
      out += "\xC8\xB2";  // U+0232
    } else {
      out += c;
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& out, const ReadoutPlan& plan) {
  return out << plan.target_word << " --" << display_rotation_word(plan.rotation_word) << "--> "
             << (plan.sign < 0 ? "-" : "") << plan.measured_word;
}

}  // namespace eqs
