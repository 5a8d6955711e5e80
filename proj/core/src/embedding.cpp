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

#include "eqs/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eqs/tolerances.hpp"

namespace eqs {

HermitianOperator RealImagSplit::reconstruct() const {
  CMatrix m = a.cast<Complex>() + Complex(0.0, 1.0) * b.cast<Complex>();
  return HermitianOperator(std::move(m));
}

EmbeddedState::EmbeddedState(StateVector state) : state_(std::move(state)) {
  if (state_.num_qubits() < 2) {
    throw std::invalid_argument("EmbeddedState needs an ancilla plus at least one system qubit");
  }
}

RealImagSplit split_hamiltonian(const HermitianOperator& h) {
  const CMatrix& m = h.matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermitian_defect(m) > tol::kSplitHermitian * scale) {
    throw std::invalid_argument("split_hamiltonian: input is not Hermitian");
  }
  RMatrix a = m.real();
  RMatrix b = m.imag();
  RealImagSplit split;
  split.a = 0.5 * (a + a.transpose());
  split.b = 0.5 * (b - b.transpose());
  split.num_qubits = h.num_qubits();
  return split;
}

EmbeddedState embed_state(const StateVector& phi) {
  const CVector& amp = phi.amplitudes();
  const Eigen::Index d = amp.size();
  CVector big(2 * d);
  big.head(d) = amp.real().cast<Complex>();
  big.tail(d) = amp.imag().cast<Complex>();
  return EmbeddedState(StateVector::normalized(big));
}

HermitianOperator embed_hamiltonian(const RealImagSplit& split) {
  const CMatrix a = split.a.cast<Complex>();
  const CMatrix b = split.b.cast<Complex>();
  const Complex i(0.0, 1.0);
  CMatrix h = i * kron(letter_matrix('I'), b) - kron(letter_matrix('Y'), a);
  // i B and sigma_y (x) A are Hermitian exactly when B = -B^T and A = A^T.
  h = 0.5 * (h + h.adjoint()).eval();
  return HermitianOperator(std::move(h));
}

StateVector decode_state(const EmbeddedState& big) {
  const CVector& amp = big.state().amplitudes();
  const Eigen::Index d = amp.size() / 2;
  const CVector phi = amp.head(d) + Complex(0.0, 1.0) * amp.tail(d);
  const double norm = phi.norm();
  if (std::abs(norm - 1.0) > tol::kDecodeNorm) {
    std::ostringstream msg;
    msg << "decode_state: decoded norm " << norm
        << " deviates from 1; the state is outside the image of the embedding";
    throw std::domain_error(msg.str());
  }
  return StateVector(phi / norm);
}

Complex antilinear_expectation_direct(const StateVector& phi, const AntilinearOperator& op) {
  if (phi.num_qubits() != op.num_qubits()) {
    throw std::invalid_argument("antilinear_expectation_direct: dimension mismatch");
  }
  const CVector& amp = phi.amplitudes();
  return amp.dot(op.linear_part().matrix() * amp.conjugate());
}

Complex antilinear_expectation_eqs(const EmbeddedState& big, const AntilinearOperator& op) {
  if (big.system_qubits() != op.num_qubits()) {
    throw std::invalid_argument("antilinear_expectation_eqs: dimension mismatch");
  }
  const CMatrix& o = op.linear_part().matrix();
  const double z_part = expectation(big.state(), HermitianOperator(kron(letter_matrix('Z'), o)));
  const double x_part = expectation(big.state(), HermitianOperator(kron(letter_matrix('X'), o)));
  return antilinear_from_expectations(z_part, x_part);
}

EqsObservablePair eqs_observables(const PauliString& o) {
  return {PauliString("Z" + o.word(), o.coefficient()), PauliString("X" + o.word(), o.coefficient())};
}

}  // namespace eqs
