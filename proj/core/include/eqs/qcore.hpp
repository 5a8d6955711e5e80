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

// Dense complex linear algebra for registers of up to 8 qubits.
//
// Qubit ordering is fixed globally: the leftmost letter of a Pauli word (and
// the left factor of a tensor product) is the most significant bit of the
// amplitude index. |q0 q1 ... q_{n-1}> has index sum_k q_k 2^(n-1-k).

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace eqs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr std::size_t kMaxQubits = 8;

/// Number of qubits of a 2^n dimension; throws if dim is not a power of two.
std::size_t qubits_for_dimension(Eigen::Index dim);

/// An n-qubit word over {I, X, Y, Z} with a real coefficient.
class PauliString {
 public:
  explicit PauliString(std::string word, double coefficient = 1.0);

  const std::string& word() const { return word_; }
  double coefficient() const { return coefficient_; }
  std::size_t num_qubits() const { return word_.size(); }

  /// "XYZ", "-XYZ" or "0.5*XYZ".
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::string word_;
  double coefficient_;
};

class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix matrix);

  static HermitianOperator zero(std::size_t num_qubits);
  static HermitianOperator identity(std::size_t num_qubits);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator*(double scale) const;

 private:
  CMatrix matrix_;
  std::size_t num_qubits_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix matrix);

  static UnitaryMatrix identity(std::size_t num_qubits);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  UnitaryMatrix adjoint() const;
  /// Matrix product: (*this) * other, i.e. `other` acts first.
  UnitaryMatrix operator*(const UnitaryMatrix& other) const;

 private:
  CMatrix matrix_;
  std::size_t num_qubits_;
};

class StateVector {
 public:
  explicit StateVector(CVector amplitudes);

  /// Computational basis state |index>.
  static StateVector basis(std::size_t num_qubits, std::size_t index);
  /// |0...0>.
  static StateVector zero(std::size_t num_qubits);
  /// Basis state from a bit string such as "0110".
  static StateVector from_bits(std::string_view bits);
  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static StateVector normalized(const CVector& amplitudes);

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }

 private:
  CVector amplitudes_;
  std::size_t num_qubits_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and positivity.
  explicit DensityMatrix(CMatrix matrix);

  static DensityMatrix from_pure(const StateVector& state);
  static DensityMatrix maximally_mixed(std::size_t num_qubits);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  double min_eigenvalue() const;

 private:
  CMatrix matrix_;
  std::size_t num_qubits_;
};

/// 2x2 matrix of a single letter in {I, X, Y, Z, 0, 1}; '0' and '1' are the
/// projectors |0><0| and |1><1|.
CMatrix letter_matrix(char letter);

/// Kronecker product, left factor most significant.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Embeds a single-qubit matrix on `qubit` of an n-qubit register.
CMatrix embed_single(const CMatrix& op, std::size_t qubit, std::size_t num_qubits);

/// coefficient * (P_0 (x) P_1 (x) ...), left-to-right in qubit order.
HermitianOperator pauli_matrix(const PauliString& word);

/// Tensor product of letters from {I, X, Y, Z, 0, 1}, e.g. "ZYY0".
HermitianOperator word_operator(std::string_view word);

/// exp(-i h t) by Hermitian eigendecomposition.
UnitaryMatrix matrix_exponential(const HermitianOperator& h, double t);

/// exp(-i h t) |state>; h in rad/s, t in seconds.
StateVector evolve(const StateVector& state, const HermitianOperator& h, double t);

StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& state);
/// u rho u^dagger.
DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho);

/// Real expectation value; throws if the imaginary residue exceeds tolerance.
double expectation(const StateVector& state, const HermitianOperator& obs);
double expectation(const DensityMatrix& rho, const HermitianOperator& obs);

/// Element-wise complex conjugation, the K operator.
StateVector conjugate_state(const StateVector& state);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
UnitaryMatrix tensor(const UnitaryMatrix& a, const UnitaryMatrix& b);
StateVector tensor(const StateVector& a, const StateVector& b);

/// <obs (x) |k><k|> where `projector_word` is a string over {0, 1} covering the
/// trailing qubits. No renormalization by the projector's weight.
double partial_expectation(const StateVector& state, const HermitianOperator& obs,
                           std::string_view projector_word);
double partial_expectation(const DensityMatrix& rho, const HermitianOperator& obs,
                           std::string_view projector_word);

/// Reduced density matrix on `keep` (listed qubits, in the order given).
CMatrix partial_trace(const CMatrix& rho, std::size_t num_qubits,
                      std::span<const std::size_t> keep);

/// |Tr(a^dagger b)| / dim, insensitive to a global phase.
double phase_invariant_overlap(const CMatrix& a, const CMatrix& b);

/// Largest |M_ij - conj(M_ji)|.
double hermitian_defect(const CMatrix& m);

}  // namespace eqs
