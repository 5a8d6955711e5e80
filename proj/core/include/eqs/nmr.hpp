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

// Pulse-level simulation of a liquid-state NMR register.
//
// Hard pulses are instantaneous rotations; delays evolve under the internal
// Hamiltonian; shaped pulses are piecewise-constant controls. Optional T2
// noise is an independent phase-damping channel per spin: the density-matrix
// element (j, l) decays as exp(-tau * sum 1/T2_k) over the spins k on which
// the basis states j and l differ.
//
// Indices in a PulseSequence refer to spins of the SpinSystem it is simulated
// on. To run a logical circuit, first reorder the molecule with
// logical_register() so that qubit k is spin k.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqs/circuits.hpp"
#include "eqs/grape.hpp"
#include "eqs/qcore.hpp"
#include "eqs/spin_system.hpp"

namespace eqs {

struct NoiseModel {
  /// Polarization epsilon of the pseudo-pure state.
  double polarization = 1e-5;
  /// Weight of the pure part moved into the other basis states.
  double pps_infidelity = 0.0;
  bool t2_dephasing = false;

  /// Throws std::invalid_argument unless 0 < polarization <= 1 and
  /// 0 <= pps_infidelity < 1.
  void validate() const;
};

/// I / 2^n + epsilon * sum_j sigma_z^j, n = sys.size(). Throws for epsilon < 0
/// or when the result would not be positive semidefinite (epsilon > 1/2^n / n).
DensityMatrix thermal_state(const SpinSystem& sys, double epsilon);

/// (1 - epsilon) I / 2^n + epsilon * rho_0, where
/// rho_0 = (1 - p)|0..0><0..0| + p / (2^n - 1) * sum_{k != 0} |k><k|.
/// With p = 0 this is the textbook pseudo-pure state.
DensityMatrix prepare_pps(double epsilon, std::size_t num_qubits = 4, double infidelity = 0.0);

enum class PulseAxis { kX, kMinusX, kY, kMinusY };

struct HardPulse {
  std::vector<std::size_t> spins;
  PulseAxis axis = PulseAxis::kX;
  double angle = 0.0;  // rad, in (-2 pi, 2 pi)
};

struct Delay {
  double duration_s = 0.0;
};

struct ShapedPulse {
  std::string label;
  std::shared_ptr<const ControlPulse> pulse;
};

using PulseSegment = std::variant<HardPulse, Delay, ShapedPulse>;
using PulseSequence = std::vector<PulseSegment>;

/// Throws std::invalid_argument for a bad segment (negative delay, flip angle
/// outside (-2 pi, 2 pi), unknown spin, empty shaped pulse).
void validate_sequence(const PulseSequence& seq, const SpinSystem& sys);

/// Evolves rho through the sequence. When `noise` is given and has
/// t2_dephasing set, dephasing acts during delays and shaped pulses (after
/// each control segment).
DensityMatrix simulate_sequence(const DensityMatrix& rho, const PulseSequence& seq, const SpinSystem& sys,
                                const NoiseModel* noise = nullptr);

/// Unitary of a noiseless sequence.
UnitaryMatrix sequence_unitary(const PulseSequence& seq, const SpinSystem& sys);

/// Delays and pi pulses implementing exp(-i phase sigma_z^a sigma_z^b) with
/// every chemical shift and every other coupling refocused. Spins a and b
/// share one Walsh sign pattern, every other spin gets its own, and a pi_x
/// pulse sits at each sign change. Throws for a == b or J_ab == 0.
PulseSequence refocused_zz(std::size_t a, std::size_t b, double phase, const SpinSystem& sys);

/// refocused_zz with phase pi/4, i.e. U(1/2J); the delays total 1/(2 J_ab).
PulseSequence refocused_jcoupling(std::size_t a, std::size_t b, const SpinSystem& sys);

/// Molecule reordered so that logical qubit k of `circuit` is spin k. The
/// circuit is widened to the full register first.
SpinSystem logical_register(const Circuit& circuit, const SpinSystem& molecule);

/// Hard pulses and refocused delays for a circuit on `sys` (qubit k = spin k).
/// CNOTs use the NMR decomposition, z rotations become x/y composites and
/// J evolutions become refocused delays.
PulseSequence compile_circuit(const Circuit& circuit, const SpinSystem& sys);

/// sign * Tr(rho M) / epsilon for the plan's measured observable M; rho is
/// the state after the readout rotation.
double read_accessible(const DensityMatrix& rho, const ReadoutPlan& plan, double epsilon = 1.0);

/// Applies the plan's ideal rotation word, then read_accessible. Throws
/// std::invalid_argument when the measured word is not FID accessible.
double measure_fid_observable(const DensityMatrix& rho, const ReadoutPlan& plan, double epsilon = 1.0);

/// One segment per line: `PULSE 0,2 x 3.14159265358979`, `DELAY 0.00125`,
/// `SHAPED readout_YXXI`. Axes are x, -x, y, -y.
std::string to_text(const PulseSequence& seq);
/// SHAPED lines resolve through `library`; an unknown label is an error.
PulseSequence parse_sequence(std::string_view text,
                             const std::map<std::string, std::shared_ptr<const ControlPulse>>& library = {});

}  // namespace eqs
