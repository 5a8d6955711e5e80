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

#pragma once

// Gate-level programs for the embedded evolutions, NMR-native gate
// decompositions and the readout-rotation planner.
//
// Rotations follow R_a(theta) = exp(-i theta sigma_a / 2). Gates in a Circuit
// are listed in time order; circuit_to_unitary multiplies them right to left.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqs/qcore.hpp"

namespace eqs {

enum class Axis { kX, kY, kZ };

struct Cnot {
  std::size_t control;
  std::size_t target;
};

struct Rotation {
  Axis axis;
  std::size_t qubit;
  double angle;  // rad
};

/// Free evolution exp(-i (pi/2) J tau sigma_z^a sigma_z^b). With tau = 1/(2J)
/// this is U(1/2J) = exp(-i pi sigma_z^a sigma_z^b / 4).
struct JEvolution {
  std::size_t a;
  std::size_t b;
  double duration_s;
  double coupling_hz;
};

struct Barrier {};

using Gate = std::variant<Cnot, Rotation, JEvolution, Barrier>;

class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits);

  /// Throws std::invalid_argument for out-of-range or coincident qubits.
  Circuit& add(Gate gate);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Logical qubit k lives on physical spin physical_map()[k] (0-based).
  const std::vector<std::size_t>& physical_map() const { return physical_; }
  void set_physical_map(std::vector<std::size_t> map);

  /// Same gates on a larger register; new qubits are idle and are assigned
  /// the unused physical spins in ascending order.
  Circuit widened(std::size_t num_qubits) const;

  std::size_t count_cnots() const;

 private:
  std::size_t num_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> physical_;
};

enum class EqsModel { kTwoQubit, kThreeQubit };

/// "2q" or "3q"; throws std::invalid_argument otherwise.
EqsModel parse_model(std::string_view tag);
std::size_t system_qubits(EqsModel model);

/// CNOT sandwich around R_y(-2 omega t) on the ancilla (qubit 0), which
/// implements exp(-i H' t) for H' = -omega sigma_y (x) sigma_x^(x)n.
/// Ancilla is mapped to C3; work qubits to C4, C2 (and C1 for 3q).
Circuit build_eqs_circuit(EqsModel model, double t, double omega);

/// Drops CNOTs whose control is still |0> when the circuit starts from
/// |0...0>; the output state on that input is unchanged.
Circuit simplify_for_zero_input(const Circuit& circuit);

/// Rz^a(pi/2) Rz^b(-pi/2) Rx^b(pi/2) U(1/2J) Ry^b(pi/2), equal to CNOT up to
/// the global phase sqrt(i). Returned in time order (Ry first).
Circuit decompose_cnot(std::size_t control, std::size_t target, double coupling_hz = 1.0);

/// Rz(theta) -> Ry(-pi/2), Rx(-theta), Ry(pi/2) in time order.
Circuit expand_z_rotations(const Circuit& circuit);

/// CNOTs decomposed and z rotations expanded. J couplings for the inserted
/// U(1/2J) gates come from `j_hz` (logical indices) when given.
Circuit to_native_gates(const Circuit& circuit, const std::optional<RMatrix>& j_hz = std::nullopt);

CMatrix rotation_matrix(Axis axis, double angle);
UnitaryMatrix gate_unitary(const Gate& gate, std::size_t num_qubits);
UnitaryMatrix circuit_to_unitary(const Circuit& circuit);

/// One gate per line: `CNOT 0 1`, `RY 0 -0.7853981634`, `J 2 3 0.006944444444`,
/// `BARRIER`. A J line carries a fifth field with the coupling in Hz unless
/// the duration is exactly 1/(2J).
std::string to_text(const Circuit& circuit);
Circuit parse_circuit(std::string_view text);

// Readout planning

/// A rotation word is a string over {I, X, Y, y}; 'y' is Y-bar = exp(+i sigma_y pi/4).
/// X = exp(-i sigma_x pi/4), Y = exp(-i sigma_y pi/4).
struct ReadoutPlan {
  std::string rotation_word;
  /// Target observable, letters {I, X, Y, Z, 0, 1}.
  std::string target_word;
  /// FID-accessible observable measured after the rotation.
  std::string measured_word;
  /// Tr(rho T) = sign * Tr(R rho R^dagger M).
  int sign = 1;
};

/// First letter in {X, Y}; the rest in {I, Z, 0, 1}.
bool is_fid_accessible(std::string_view word);

/// Throws std::invalid_argument when no rotation word maps the target to an
/// accessible form (e.g. identity or a projector on the observed qubit).
ReadoutPlan plan_readout(const PauliString& target, std::string_view spectator_projector = {});
ReadoutPlan plan_readout(std::string_view target_word);

UnitaryMatrix readout_unitary(std::string_view rotation_word);

/// Rotation word with 'y' rendered as "Ȳ".
std::string display_rotation_word(std::string_view rotation_word);

std::ostream& operator<<(std::ostream& out, const ReadoutPlan& plan);

}  // namespace eqs
