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

// One-ancilla embedding of an n-qubit problem into n + 1 qubits.
//
// A Hamiltonian H = A + iB (A real symmetric, B real antisymmetric) maps to
//   H' = i sigma_0 (x) B - sigma_y (x) A,
// and a state phi maps to |0> (x) Re(phi) + |1> (x) Im(phi). The ancilla is
// always qubit 0 (the most significant bit) of the enlarged register. Under
// this map <phi| O |phi*> = <sigma_z (x) O> - i <sigma_x (x) O>.

#include <cstddef>

#include "eqs/qcore.hpp"

namespace eqs {

struct RealImagSplit {
  RMatrix a;  // symmetric, rad/s
  RMatrix b;  // antisymmetric, rad/s
  std::size_t num_qubits = 0;

  /// a + i b.
  HermitianOperator reconstruct() const;
};

/// A StateVector on n + 1 qubits whose qubit 0 is the ancilla.
class EmbeddedState {
 public:
  explicit EmbeddedState(StateVector state);

  const StateVector& state() const { return state_; }
  std::size_t system_qubits() const { return state_.num_qubits() - 1; }

 private:
  StateVector state_;
};

/// The anti-linear operator O K. Only the linear part is stored.
class AntilinearOperator {
 public:
  explicit AntilinearOperator(HermitianOperator linear_part) : linear_(std::move(linear_part)) {}
  explicit AntilinearOperator(const PauliString& word) : linear_(pauli_matrix(word)) {}

  const HermitianOperator& linear_part() const { return linear_; }
  std::size_t num_qubits() const { return linear_.num_qubits(); }

 private:
  HermitianOperator linear_;
};

/// Throws std::invalid_argument if h is not Hermitian within tol::kSplitHermitian.
/// A is symmetrized and B antisymmetrized to remove rounding residue.
RealImagSplit split_hamiltonian(const HermitianOperator& h);

EmbeddedState embed_state(const StateVector& phi);

HermitianOperator embed_hamiltonian(const RealImagSplit& split);

/// Inverse of embed_state. Throws std::domain_error when the decoded norm
/// is off by more than tol::kDecodeNorm.
StateVector decode_state(const EmbeddedState& big);

/// <phi| O |phi*>, computed literally.
Complex antilinear_expectation_direct(const StateVector& phi, const AntilinearOperator& op);

/// <sigma_z (x) O> - i <sigma_x (x) O> on the embedded state.
Complex antilinear_expectation_eqs(const EmbeddedState& big, const AntilinearOperator& op);

/// Combines the two measured enlarged-space expectations into <O K>.
inline Complex antilinear_from_expectations(double z_part, double x_part) {
  return {z_part, -x_part};
}

/// The two enlarged-space Pauli words that encode <O K>: "Z" + O and "X" + O.
struct EqsObservablePair {
  PauliString z_part;
  PauliString x_part;
};
EqsObservablePair eqs_observables(const PauliString& o);

}  // namespace eqs
