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

#include "eqs/qcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "eqs/tolerances.hpp"

namespace eqs {

namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tolerance) {
  return hermitian_defect(m) <= tolerance * std::max(1.0, max_abs(m));
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
  }
}

void require_same_dimension(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw std::invalid_argument(msg.str());
  }
}

double real_part_checked(Complex value, const char* what) {
  if (std::abs(value.imag()) > tol::kImagResidue * std::max(1.0, std::abs(value.real()))) {
    std::ostringstream msg;
    msg << what << ": imaginary residue " << value.imag() << " exceeds tolerance";
    throw std::runtime_error(msg.str());
  }
  return value.real();
}

CMatrix projector_word_matrix(std::string_view projector_word) {
  CMatrix p = CMatrix::Identity(1, 1);
  for (char c : projector_word) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("projector word must be over {0, 1}");
    }
    p = kron(p, letter_matrix(c));
  }
  return p;
}

}  // namespace

std::size_t qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::size_t>(dim))) {
    throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two >= 2");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(static_cast<std::size_t>(dim)));
  if (n > kMaxQubits) {
    throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
  }
  return n;
}

// PauliString

PauliString::PauliString(std::string word, double coefficient)
    : word_(std::move(word)), coefficient_(coefficient) {
  if (word_.empty()) throw std::invalid_argument("empty Pauli word");
  if (word_.size() > kMaxQubits) throw std::invalid_argument("Pauli word longer than 8 qubits");
  for (char c : word_) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
    }
  }
  if (!std::isfinite(coefficient_)) throw std::invalid_argument("non-finite Pauli coefficient");
}

std::string PauliString::str() const {
  if (coefficient_ == 1.0) return word_;
  if (coefficient_ == -1.0) return "-" + word_;
  std::ostringstream out;
  out << coefficient_ << "*" << word_;
  return out.str();
}

// HermitianOperator

HermitianOperator::HermitianOperator(CMatrix matrix)
    : matrix_(std::move(matrix)), num_qubits_(0) {
  require_square(matrix_, "HermitianOperator");
  num_qubits_ = qubits_for_dimension(matrix_.rows());
  if (!matrix_.allFinite()) throw std::invalid_argument("HermitianOperator: non-finite entry");
  if (!is_hermitian(matrix_, tol::kHermitian)) {
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
  }
}

HermitianOperator HermitianOperator::zero(std::size_t num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return HermitianOperator(CMatrix::Zero(d, d));
}

HermitianOperator HermitianOperator::identity(std::size_t num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return HermitianOperator(CMatrix::Identity(d, d));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  require_same_dimension(dimension(), other.dimension(), "HermitianOperator::operator+");
  return HermitianOperator(matrix_ + other.matrix_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  return HermitianOperator(matrix_ * scale);
}

// UnitaryMatrix

UnitaryMatrix::UnitaryMatrix(CMatrix matrix) : matrix_(std::move(matrix)), num_qubits_(0) {
  require_square(matrix_, "UnitaryMatrix");
  num_qubits_ = qubits_for_dimension(matrix_.rows());
  const CMatrix defect = matrix_.adjoint() * matrix_ - CMatrix::Identity(matrix_.rows(), matrix_.cols());
  if (!matrix_.allFinite() || max_abs(defect) > tol::kUnitary) {
    throw std::invalid_argument("UnitaryMatrix: matrix is not unitary");
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return UnitaryMatrix(CMatrix::Identity(d, d));
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(matrix_.adjoint()); }

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& other) const {
  require_same_dimension(dimension(), other.dimension(), "UnitaryMatrix::operator*");
  return UnitaryMatrix(matrix_ * other.matrix_);
}

// StateVector

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)), num_qubits_(0) {
  num_qubits_ = qubits_for_dimension(amplitudes_.size());
  if (!amplitudes_.allFinite()) throw std::invalid_argument("StateVector: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > tol::kNorm) {
    std::ostringstream msg;
    msg << "StateVector: norm " << amplitudes_.norm() << " is not 1";
    throw std::invalid_argument(msg.str());
  }
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  if (static_cast<Eigen::Index>(index) >= d) throw std::invalid_argument("basis index out of range");
  CVector v = CVector::Zero(d);
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::zero(std::size_t num_qubits) { return basis(num_qubits, 0); }

StateVector StateVector::from_bits(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must be over {0, 1}");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return basis(bits.size(), index);
}

StateVector StateVector::normalized(const CVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("cannot normalize a zero vector");
  return StateVector(amplitudes / norm);
}

// DensityMatrix

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)), num_qubits_(0) {
  require_square(matrix_, "DensityMatrix");
  num_qubits_ = qubits_for_dimension(matrix_.rows());
  if (!matrix_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entry");
  if (hermitian_defect(matrix_) > tol::kHermitian) {
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  }
  const Complex trace = matrix_.trace();
  if (std::abs(trace - Complex(1.0)) > tol::kTrace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << trace << " is not 1";
    throw std::invalid_argument(msg.str());
  }
  if (min_eigenvalue() < -tol::kPositive) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
  const CVector& a = state.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Free functions

CMatrix letter_matrix(char letter) {
  using namespace std::complex_literals;
  CMatrix m(2, 2);
  switch (letter) {
    case 'I': m << 1.0, 0.0, 0.0, 1.0; break;
    case 'X': m << 0.0, 1.0, 1.0, 0.0; break;
    case 'Y': m << 0.0, -1i, 1i, 0.0; break;
    case 'Z': m << 1.0, 0.0, 0.0, -1.0; break;
    case '0': m << 1.0, 0.0, 0.0, 0.0; break;
    case '1': m << 0.0, 0.0, 0.0, 1.0; break;
    default: throw std::invalid_argument(std::string("unknown operator letter '") + letter + "'");
  }
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix embed_single(const CMatrix& op, std::size_t qubit, std::size_t num_qubits) {
  if (qubit >= num_qubits) throw std::invalid_argument("qubit index out of range");
  if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed_single expects a 2x2 matrix");
  const Eigen::Index left = Eigen::Index{1} << qubit;
  const Eigen::Index right = Eigen::Index{1} << (num_qubits - qubit - 1);
  return kron(kron(CMatrix::Identity(left, left), op), CMatrix::Identity(right, right));
}

HermitianOperator pauli_matrix(const PauliString& word) {
  return HermitianOperator(word_operator(word.word()).matrix() * word.coefficient());
}

HermitianOperator word_operator(std::string_view word) {
  if (word.empty()) throw std::invalid_argument("empty operator word");
  if (word.size() > kMaxQubits) throw std::invalid_argument("operator word longer than 8 qubits");
  CMatrix m = letter_matrix(word.front());
  for (std::size_t k = 1; k < word.size(); ++k) m = kron(m, letter_matrix(word[k]));
  return HermitianOperator(std::move(m));
}

UnitaryMatrix matrix_exponential(const HermitianOperator& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  const CMatrix& v = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  CVector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    phases(k) = std::polar(1.0, -lambda(k) * t);
  }
  return UnitaryMatrix(v * phases.asDiagonal() * v.adjoint());
}

StateVector evolve(const StateVector& state, const HermitianOperator& h, double t) {
  require_same_dimension(state.dimension(), h.dimension(), "evolve");
  if (t < 0.0) throw std::invalid_argument("evolve: negative time");
  return apply_unitary(matrix_exponential(h, t), state);
}

StateVector apply_unitary(const UnitaryMatrix& u, const StateVector& state) {
  require_same_dimension(u.dimension(), state.dimension(), "apply_unitary");
  return StateVector::normalized(u.matrix() * state.amplitudes());
}

DensityMatrix apply_unitary(const UnitaryMatrix& u, const DensityMatrix& rho) {
  require_same_dimension(u.dimension(), rho.dimension(), "apply_unitary");
  CMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

double expectation(const StateVector& state, const HermitianOperator& obs) {
  require_same_dimension(state.dimension(), obs.dimension(), "expectation");
  const Complex value = state.amplitudes().dot(obs.matrix() * state.amplitudes());
  return real_part_checked(value, "expectation");
}

double expectation(const DensityMatrix& rho, const HermitianOperator& obs) {
  require_same_dimension(rho.dimension(), obs.dimension(), "expectation");
  const Complex value = (rho.matrix() * obs.matrix()).trace();
  return real_part_checked(value, "expectation");
}

StateVector conjugate_state(const StateVector& state) {
  return StateVector(state.amplitudes().conjugate());
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

UnitaryMatrix tensor(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return UnitaryMatrix(kron(a.matrix(), b.matrix()));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  return StateVector::normalized(kron(a.amplitudes(), b.amplitudes()));
}

double partial_expectation(const StateVector& state, const HermitianOperator& obs,
                           std::string_view projector_word) {
  const HermitianOperator full(kron(obs.matrix(), projector_word_matrix(projector_word)));
  return expectation(state, full);
}

double partial_expectation(const DensityMatrix& rho, const HermitianOperator& obs,
                           std::string_view projector_word) {
  const HermitianOperator full(kron(obs.matrix(), projector_word_matrix(projector_word)));
  return expectation(rho, full);
}

CMatrix partial_trace(const CMatrix& rho, std::size_t num_qubits, std::span<const std::size_t> keep) {
  if (rho.rows() != (Eigen::Index{1} << num_qubits)) throw std::invalid_argument("partial_trace: dimension mismatch");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < num_qubits; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const std::size_t nk = keep.size();
  const Eigen::Index dk = Eigen::Index{1} << nk;
  const std::size_t nt = traced.size();
  // Index of a full basis state from its kept and traced bit patterns.
  auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < nk; ++k) {
      const std::size_t bit = (kept_bits >> (nk - 1 - k)) & 1U;
      index |= bit << (num_qubits - 1 - keep[k]);
    }
    for (std::size_t k = 0; k < nt; ++k) {
      const std::size_t bit = (traced_bits >> (nt - 1 - k)) & 1U;
      index |= bit << (num_qubits - 1 - traced[k]);
    }
    return static_cast<Eigen::Index>(index);
  };
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < (std::size_t{1} << nt); ++t) {
        sum += rho(compose(static_cast<std::size_t>(i), t), compose(static_cast<std::size_t>(j), t));
      }
      out(i, j) = sum;
    }
  }
  return out;
}

double phase_invariant_overlap(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("phase_invariant_overlap: dimension mismatch");
  }
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace eqs
