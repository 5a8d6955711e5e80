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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eqs/qcore.hpp"
#include "eqs/tolerances.hpp"
#include "support/generators.hpp"

namespace eqs {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

TEST(PauliMatrix, SingleYIsStandard) {
  const CMatrix y = pauli_matrix(PauliString("Y")).matrix();
  EXPECT_EQ(y(0, 0), Complex(0, 0));
  EXPECT_EQ(y(0, 1), -kI);
  EXPECT_EQ(y(1, 0), kI);
  EXPECT_EQ(y(1, 1), Complex(0, 0));
}

TEST(PauliMatrix, XXIsAntiDiagonal) {
  const CMatrix xx = pauli_matrix(PauliString("XX")).matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(xx(i, j), Complex(i + j == 3 ? 1.0 : 0.0, 0.0));
  }
}

TEST(PauliMatrix, CoefficientScales) {
  const CMatrix z = pauli_matrix(PauliString("Z", -0.5)).matrix();
  EXPECT_DOUBLE_EQ(z(0, 0).real(), -0.5);
  EXPECT_DOUBLE_EQ(z(1, 1).real(), 0.5);
}

TEST(PauliMatrix, LeftmostLetterIsMostSignificant) {
  // Z on qubit 0 only flips the sign of the lower half of the basis.
  const CMatrix zi = pauli_matrix(PauliString("ZI")).matrix();
  EXPECT_DOUBLE_EQ(zi(1, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(zi(2, 2).real(), -1.0);
}

TEST(PauliMatrix, RejectsBadWords) {
  EXPECT_THROW(PauliString(""), std::invalid_argument);
  EXPECT_THROW(PauliString("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString("XXXXXXXXX"), std::invalid_argument);
  EXPECT_THROW(PauliString("X", std::nan("")), std::invalid_argument);
}

TEST(Expectation, ZZOnZeroZeroIsOne) {
  EXPECT_DOUBLE_EQ(expectation(StateVector::zero(2), pauli_matrix(PauliString("ZZ"))), 1.0);
}

TEST(Expectation, DimensionMismatchThrows) {
  EXPECT_THROW(expectation(StateVector::zero(2), pauli_matrix(PauliString("Z"))), std::invalid_argument);
  EXPECT_THROW(expectation(DensityMatrix::maximally_mixed(3), pauli_matrix(PauliString("ZZ"))),
               std::invalid_argument);
}

TEST(Evolve, RabiHalfFlip) {
  const double omega = 3.0;
  const StateVector out = evolve(StateVector::zero(1), pauli_matrix(PauliString("X", omega)), kPi / 2 / omega);
  EXPECT_NEAR(std::abs(out.amplitudes()(0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out.amplitudes()(1) - (-kI)), 0.0, 1e-12);
}

TEST(Evolve, TwoQubitXXMatchesClosedForm) {
  const double omega = 2 * kPi * 25.0;
  for (double t : {0.0004, 0.0052, 0.0196}) {
    const StateVector out = evolve(StateVector::zero(2), pauli_matrix(PauliString("XX", omega)), t);
    CVector expected = CVector::Zero(4);
    expected(0) = std::cos(omega * t);
    expected(3) = -kI * std::sin(omega * t);
    EXPECT_LT((out.amplitudes() - expected).norm(), 1e-12) << "t=" << t;
  }
}

TEST(Evolve, ZeroTimeIsIdentity) {
  Gen g(11);
  const StateVector psi = g.state(3);
  EXPECT_LT((evolve(psi, g.hermitian(3), 0.0).amplitudes() - psi.amplitudes()).norm(), 1e-14);
}

TEST(Evolve, Errors) {
  EXPECT_THROW(evolve(StateVector::zero(1), pauli_matrix(PauliString("X")), -1.0), std::invalid_argument);
  EXPECT_THROW(evolve(StateVector::zero(1), pauli_matrix(PauliString("XX")), 1.0), std::invalid_argument);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(HermitianOperator{bad}, std::invalid_argument);
}

TEST(Evolve, MatchesTaylorOracleAndKeepsNorm) {
  Gen g(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + g.index(3);
    const HermitianOperator h = g.hermitian(n, 2.0);
    const double t = g.uniform(0.0, 3.0);
    const StateVector psi = g.state(n);
    const StateVector out = evolve(psi, h, t);
    const CVector oracle = testing::taylor_expm(h.matrix(), t) * psi.amplitudes();
    EXPECT_LT((out.amplitudes() - oracle).norm(), 1e-10);
    EXPECT_NEAR(out.amplitudes().norm(), 1.0, tol::kNorm);
  }
}

TEST(States, ValidationRejectsBadInputs) {
  EXPECT_THROW(StateVector(CVector::Constant(4, 1.0)), std::invalid_argument);
  EXPECT_THROW(StateVector(CVector::Constant(3, 1.0 / std::sqrt(3.0))), std::invalid_argument);
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = 1.5;
  rho(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{rho}, std::invalid_argument);
  rho(0, 0) = 0.6;
  rho(1, 1) = 0.6;
  EXPECT_THROW(DensityMatrix{rho}, std::invalid_argument);
  EXPECT_THROW(UnitaryMatrix(CMatrix::Constant(2, 2, 1.0)), std::invalid_argument);
}

TEST(States, FromBitsAndConjugation) {
  const StateVector s = StateVector::from_bits("0110");
  EXPECT_EQ(s.amplitudes()(6), Complex(1, 0));
  Gen g(13);
  const StateVector psi = g.state(2);
  EXPECT_LT((conjugate_state(psi).amplitudes() - psi.amplitudes().conjugate()).norm(), 0.0 + 1e-300);
}

TEST(Tensor, ProductStatesAndOperators) {
  const StateVector s = tensor(StateVector::from_bits("1"), StateVector::from_bits("0"));
  EXPECT_EQ(s.amplitudes()(2), Complex(1, 0));
  const HermitianOperator op = tensor(pauli_matrix(PauliString("X")), pauli_matrix(PauliString("Z")));
  EXPECT_LT((op.matrix() - pauli_matrix(PauliString("XZ")).matrix()).norm(), 1e-15);
}

TEST(PartialTrace, ProductStateFactorizes) {
  Gen g(14);
  const StateVector a = g.state(1);
  const StateVector b = g.state(2);
  const DensityMatrix rho = DensityMatrix::from_pure(tensor(a, b));
  const std::size_t keep_a[] = {0};
  const CMatrix ra = partial_trace(rho.matrix(), 3, keep_a);
  EXPECT_LT((ra - a.amplitudes() * a.amplitudes().adjoint()).norm(), 1e-12);
  const std::size_t keep_b[] = {1, 2};
  const CMatrix rb = partial_trace(rho.matrix(), 3, keep_b);
  EXPECT_LT((rb - b.amplitudes() * b.amplitudes().adjoint()).norm(), 1e-12);
}

TEST(PartialExpectation, ProjectorOnTrailingQubit) {
  const StateVector s = tensor(StateVector::zero(2), StateVector::from_bits("1"));
  EXPECT_DOUBLE_EQ(partial_expectation(s, pauli_matrix(PauliString("ZZ")), "1"), 1.0);
  EXPECT_DOUBLE_EQ(partial_expectation(s, pauli_matrix(PauliString("ZZ")), "0"), 0.0);
  EXPECT_DOUBLE_EQ(expectation(s, word_operator("ZZ1")), 1.0);
}

TEST(Overlap, PhaseInvariant) {
  Gen g(15);
  const UnitaryMatrix u = matrix_exponential(g.hermitian(2), 0.7);
  EXPECT_NEAR(phase_invariant_overlap(u.matrix(), u.matrix() * std::polar(1.0, 1.234)), 1.0, 1e-12);
  EXPECT_NEAR(phase_invariant_overlap(letter_matrix('I'), letter_matrix('X')), 0.0, 1e-15);
}

TEST(DensityMatrixProperty, UnitaryConjugationKeepsInvariants) {
  Gen g(16);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + g.index(3);
    const DensityMatrix rho = g.density(n);
    const DensityMatrix out = apply_unitary(matrix_exponential(g.hermitian(n), 1.0), rho);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, tol::kTrace);
    EXPECT_LT(hermitian_defect(out.matrix()), tol::kHermitian);
    EXPECT_GT(out.min_eigenvalue(), -tol::kPositive);
  }
}

}  // namespace
}  // namespace eqs
