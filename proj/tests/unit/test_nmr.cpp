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

#include "eqs/nmr.hpp"
#include "eqs/tolerances.hpp"
#include "support/generators.hpp"

namespace eqs {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;
constexpr double kOmega = 2 * kPi * 25.0;

SpinSystem molecule() { return load_spin_system(std::string(EQSIM_MOLECULE_DIR) + "/synthetic_crotonic_acid.json"); }

double total_delay(const PulseSequence& seq) {
  double tau = 0.0;
  for (const PulseSegment& s : seq) {
    if (const auto* d = std::get_if<Delay>(&s)) tau += d->duration_s;
  }
  return tau;
}

TEST(SpinSystemConfig, ShippedFileMatchesBuiltIn) {
  const SpinSystem file = molecule();
  const SpinSystem builtin = synthetic_crotonic_acid();
  EXPECT_EQ(file.labels, builtin.labels);
  EXPECT_EQ(file.shifts_hz, builtin.shifts_hz);
  EXPECT_EQ(file.reference_hz, builtin.reference_hz);
  EXPECT_EQ(file.j_hz, builtin.j_hz);
  EXPECT_EQ(file.t2_s, builtin.t2_s);
  EXPECT_NE(file.note.find("SYNTHETIC"), std::string::npos);
  EXPECT_DOUBLE_EQ(file.offset_hz(file.index_of("C3")), -50.0);
}

TEST(SpinSystemConfig, JsonRoundTripAndErrors) {
  const SpinSystem s = molecule();
  const SpinSystem back = parse_spin_system(to_json(s));
  EXPECT_EQ(back.j_hz, s.j_hz);
  EXPECT_THROW(parse_spin_system("{"), std::invalid_argument);
  EXPECT_THROW(parse_spin_system(R"({"spins":["A","B"],"shifts_hz":[0,0],"reference_hz":0,
                                     "j_couplings_hz":[[1,2]],"t2_s":[1,1]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_spin_system(R"({"spins":["A","B"],"shifts_hz":[0,0],"reference_hz":0,
                                     "j_couplings_hz":[[1]],"t2_s":[1,0]})"),
               std::invalid_argument);
  EXPECT_THROW(load_spin_system("/nonexistent/molecule.json"), std::runtime_error);
  const SpinSystem templ = load_spin_system(std::string(EQSIM_MOLECULE_DIR) + "/template.json");
  EXPECT_EQ(templ.size(), 4u);
}

TEST(InternalHamiltonian, ZeroForDegenerateUncoupledSpins) {
  SpinSystem s = molecule();
  s.shifts_hz.assign(4, s.reference_hz);
  s.j_hz.setZero();
  EXPECT_LT(internal_hamiltonian(s).matrix().norm(), 1e-300);
}

TEST(InternalHamiltonian, MatchesFrozenOracle) {
  const auto& frozen = testing::oracles()["molecule_energies"];
  const Eigen::VectorXd e = internal_energies(molecule());
  ASSERT_EQ(frozen.size(), 16u);
  for (Eigen::Index k = 0; k < 16; ++k) EXPECT_NEAR(e(k), frozen[static_cast<std::size_t>(k)].get<double>(), 1e-9);
}

TEST(InternalHamiltonian, OffsetTermOnC3) {
  const SpinSystem s = molecule();
  const std::size_t c3[] = {s.index_of("C3")};
  SpinSystem one = s.subsystem(c3);
  const CMatrix h = internal_hamiltonian(one).matrix();
  EXPECT_NEAR(h(0, 0).real(), -50.0 * kPi, 1e-9);
  EXPECT_NEAR(h(1, 1).real(), 50.0 * kPi, 1e-9);
}

TEST(InternalHamiltonian, HalfJEvolutionIsZZQuarterTurn) {
  SpinSystem s = molecule();
  const std::size_t pair[] = {2, 3};
  SpinSystem two = s.subsystem(pair);
  two.shifts_hz.assign(2, two.reference_hz);
  const double j = two.coupling_hz(0, 1);
  const UnitaryMatrix u = matrix_exponential(internal_hamiltonian(two), 1.0 / (2 * j));
  const UnitaryMatrix zz = matrix_exponential(pauli_matrix(PauliString("ZZ", kPi / 4)), 1.0);
  EXPECT_NEAR(phase_invariant_overlap(u.matrix(), zz.matrix()), 1.0, 1e-12);
}

TEST(States, PpsPureLimitAndScaling) {
  EXPECT_LT((prepare_pps(1.0).matrix() - DensityMatrix::from_pure(StateVector::zero(4)).matrix()).norm(), 1e-15);
  const double eps = 1e-5;
  const DensityMatrix pps = prepare_pps(eps);
  Gen g(51);
  for (int trial = 0; trial < 20; ++trial) {
    std::string w = g.pauli_word(4);
    if (w == "IIII") w = "ZIII";
    const double pure = expectation(StateVector::zero(4), pauli_matrix(PauliString(w)));
    EXPECT_NEAR(expectation(pps, pauli_matrix(PauliString(w))), eps * pure, 1e-15) << w;
  }
  EXPECT_THROW(prepare_pps(0.0), std::invalid_argument);
  EXPECT_THROW(prepare_pps(1.5), std::invalid_argument);
  EXPECT_THROW(prepare_pps(0.1, 4, 1.0), std::invalid_argument);
}

TEST(States, Thermal) {
  const SpinSystem s = molecule();
  EXPECT_LT((thermal_state(s, 0.0).matrix() - DensityMatrix::maximally_mixed(4).matrix()).norm(), 1e-15);
  const DensityMatrix th = thermal_state(s, 1e-5);
  EXPECT_NEAR(th.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(expectation(th, pauli_matrix(PauliString("ZIII"))), 16e-5, 1e-15);
  EXPECT_THROW(thermal_state(s, -1e-3), std::invalid_argument);
  EXPECT_THROW(thermal_state(s, 0.1), std::invalid_argument);
}

TEST(Simulate, EmptySequenceIsIdentity) {
  Gen g(52);
  const DensityMatrix rho = g.density(4);
  EXPECT_LT((simulate_sequence(rho, {}, molecule()).matrix() - rho.matrix()).norm(), 1e-15);
}

TEST(Simulate, TwoPiPulsesOnAllSpinsCancel) {
  Gen g(53);
  const DensityMatrix rho = g.density(4);
  const HardPulse pi{{0, 1, 2, 3}, PulseAxis::kX, kPi};
  const DensityMatrix out = simulate_sequence(rho, {pi, pi}, molecule());
  EXPECT_LT((out.matrix() - rho.matrix()).norm(), 1e-12);
}

TEST(Simulate, HardPulseAxes) {
  const SpinSystem s = molecule();
  const DensityMatrix rho = DensityMatrix::from_pure(StateVector::zero(4));
  // pi/2 about +x takes +z to -y; about +y to +x; the negative axes flip the sign.
  const auto after = [&](PulseAxis axis, const char* word) {
    return expectation(simulate_sequence(rho, {HardPulse{{0}, axis, kPi / 2}}, s), word_operator(word));
  };
  EXPECT_NEAR(after(PulseAxis::kX, "YIII"), -1.0, 1e-12);
  EXPECT_NEAR(after(PulseAxis::kMinusX, "YIII"), 1.0, 1e-12);
  EXPECT_NEAR(after(PulseAxis::kY, "XIII"), 1.0, 1e-12);
  EXPECT_NEAR(after(PulseAxis::kMinusY, "XIII"), -1.0, 1e-12);
}

TEST(Simulate, Validation) {
  const SpinSystem s = molecule();
  const DensityMatrix rho = DensityMatrix::maximally_mixed(4);
  EXPECT_THROW(simulate_sequence(rho, {Delay{-1.0}}, s), std::invalid_argument);
  EXPECT_THROW(simulate_sequence(rho, {HardPulse{{0}, PulseAxis::kX, 7.0}}, s), std::invalid_argument);
  EXPECT_THROW(simulate_sequence(rho, {HardPulse{{4}, PulseAxis::kX, 1.0}}, s), std::invalid_argument);
  EXPECT_THROW(simulate_sequence(rho, {ShapedPulse{"missing", nullptr}}, s), std::invalid_argument);
  EXPECT_THROW(simulate_sequence(DensityMatrix::maximally_mixed(3), {}, s), std::invalid_argument);
}

TEST(Refocusing, JCouplingOnEveryPair) {
  const SpinSystem s = molecule();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      const PulseSequence seq = refocused_jcoupling(a, b, s);
      EXPECT_NEAR(total_delay(seq), 1.0 / (2.0 * s.coupling_hz(a, b)), 1e-15);
      std::string w(4, 'I');
      w[a] = w[b] = 'Z';
      const UnitaryMatrix target = matrix_exponential(pauli_matrix(PauliString(w, kPi / 4)), 1.0);
      EXPECT_GE(phase_invariant_overlap(target.matrix(), sequence_unitary(seq, s).matrix()), 1.0 - 1e-8)
          << a << "," << b;
    }
  }
}

TEST(Refocusing, C3C4DelayAndSpectators) {
  const SpinSystem s = molecule();
  const std::size_t c3 = s.index_of("C3"), c4 = s.index_of("C4");
  const PulseSequence seq = refocused_jcoupling(c3, c4, s);
  EXPECT_NEAR(total_delay(seq), 1.0 / (2.0 * 41.6), 1e-15);
  // Reduced state of the unaddressed spins is unchanged.
  Gen g(54);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = g.density(4);
    const DensityMatrix out = simulate_sequence(rho, seq, s);
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k != c3 && k != c4) others.push_back(k);
    }
    EXPECT_LT((partial_trace(out.matrix(), 4, others) - partial_trace(rho.matrix(), 4, others)).cwiseAbs().maxCoeff(),
              1e-8);
  }
}

TEST(Refocusing, NegativePhaseAndErrors) {
  const SpinSystem s = molecule();
  const PulseSequence seq = refocused_zz(0, 1, -0.3, s);
  const UnitaryMatrix target = matrix_exponential(pauli_matrix(PauliString("ZZII", -0.3)), 1.0);
  EXPECT_GE(phase_invariant_overlap(target.matrix(), sequence_unitary(seq, s).matrix()), 1.0 - 1e-10);
  EXPECT_THROW(refocused_jcoupling(2, 2, s), std::invalid_argument);
  SpinSystem uncoupled = s;
  uncoupled.j_hz.setZero();
  EXPECT_THROW(refocused_jcoupling(0, 1, uncoupled), std::invalid_argument);
}

// The compiled sequence for the simplified 2q circuit (hard pulses and
// refocused delays 1/(2 J_C3C2) and 1/(2 J_C3C4)) against the circuit.
TEST(CompileCircuit, TwoQubitSequenceMatchesCircuitOnGrid) {
  const SpinSystem mol = molecule();
  for (int k = 0; k < 25; ++k) {
    const double t = 0.4e-3 + 0.8e-3 * k;
    const Circuit c = simplify_for_zero_input(build_eqs_circuit(EqsModel::kTwoQubit, t, kOmega)).widened(4);
    const SpinSystem sys = logical_register(c, mol);
    ASSERT_EQ(sys.labels, (std::vector<std::string>{"C3", "C4", "C2", "C1"}));
    const PulseSequence seq = compile_circuit(c, sys);
    const DensityMatrix zero = DensityMatrix::from_pure(StateVector::zero(4));
    const DensityMatrix pulsed = simulate_sequence(zero, seq, sys);
    const DensityMatrix gated = apply_unitary(circuit_to_unitary(c), zero);
    EXPECT_LT((pulsed.matrix() - gated.matrix()).cwiseAbs().maxCoeff(), 1e-6) << "t=" << t;
    if (k == 0) {
      std::vector<double> delays;
      double run = 0.0;
      for (const PulseSegment& s : seq) {
        if (const auto* d = std::get_if<Delay>(&s)) {
          run += d->duration_s;
        } else if (run > 0.0 && std::get<HardPulse>(s).spins.size() == 1) {
          delays.push_back(run);
          run = 0.0;
        }
      }
      if (run > 0.0) delays.push_back(run);
      ASSERT_EQ(delays.size(), 2u);
      EXPECT_NEAR(delays[0], 1.0 / (2 * 69.7), 1e-12);  // C3-C2 first
      EXPECT_NEAR(delays[1], 1.0 / (2 * 41.6), 1e-12);  // then C3-C4
    }
  }
}

TEST(CompileCircuit, ThreeQubitSequenceMatchesCircuit) {
  const SpinSystem mol = molecule();
  const Circuit c = simplify_for_zero_input(build_eqs_circuit(EqsModel::kThreeQubit, 0.0036, kOmega));
  const SpinSystem sys = logical_register(c, mol);
  EXPECT_GE(phase_invariant_overlap(circuit_to_unitary(c).matrix(), sequence_unitary(compile_circuit(c, sys), sys).matrix()),
            1.0 - 1e-9);
}

TEST(SequenceText, GoldenAndRoundTrip) {
  const SpinSystem mol = molecule();
  const Circuit c = simplify_for_zero_input(build_eqs_circuit(EqsModel::kTwoQubit, 0.0004, kOmega)).widened(4);
  const SpinSystem sys = logical_register(c, mol);
  const PulseSequence seq = compile_circuit(c, sys);
  EXPECT_EQ(to_text(seq), testing::read_golden("sequence_2q.txt"));
  const PulseSequence back = parse_sequence(to_text(seq));
  EXPECT_GE(phase_invariant_overlap(sequence_unitary(seq, sys).matrix(), sequence_unitary(back, sys).matrix()),
            1.0 - 1e-10);
  EXPECT_THROW(parse_sequence("SHAPED nope\n"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("PULSE 0 z 1.0\n"), std::invalid_argument);
  auto pulse = std::make_shared<const ControlPulse>(ControlPulse::zeros(ControlMode::kGlobal, 2, 1e-5, 4));
  const PulseSequence shaped = parse_sequence("SHAPED p\nDELAY 0.001\n", {{"p", pulse}});
  ASSERT_EQ(shaped.size(), 2u);
  EXPECT_EQ(to_text(shaped), "SHAPED p\nDELAY 0.001\n");
}

// Free evolution is diagonal in the computational basis, so with dephasing
// every off-diagonal element can only shrink in magnitude.
TEST(Dephasing, CoherencesContractAndTraceIsKept) {
  const SpinSystem s = molecule();
  NoiseModel noise;
  noise.t2_dephasing = true;
  Gen g(55);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = g.density(4);
    const DensityMatrix out = simulate_sequence(rho, {Delay{g.uniform(0.0, 0.5)}}, s, &noise);
    for (Eigen::Index j = 0; j < 16; ++j) {
      EXPECT_NEAR(out.matrix()(j, j).real(), rho.matrix()(j, j).real(), 1e-14);
      for (Eigen::Index l = j + 1; l < 16; ++l) {
        EXPECT_LT(std::abs(out.matrix()(j, l)), std::abs(rho.matrix()(j, l)));
      }
    }
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, tol::kTrace);
    EXPECT_LT(hermitian_defect(out.matrix()), tol::kHermitian);
  }
}

TEST(Dephasing, SingleSpinDecayRate) {
  const SpinSystem s = molecule();
  NoiseModel noise;
  noise.t2_dephasing = true;
  // |+> on C1 with the others in |0>: the C1 coherence decays as exp(-tau / T2).
  const HardPulse h{{0}, PulseAxis::kY, kPi / 2};
  const DensityMatrix rho = simulate_sequence(DensityMatrix::from_pure(StateVector::zero(4)), {h}, s);
  const double tau = 0.3;
  const DensityMatrix out = simulate_sequence(rho, {Delay{tau}}, s, &noise);
  EXPECT_NEAR(std::abs(out.matrix()(0, 8)), 0.5 * std::exp(-tau / s.t2_s[0]), 1e-12);
}

TEST(Dephasing, ShapedPulseKeepsTrace) {
  const SpinSystem s = molecule();
  NoiseModel noise;
  noise.t2_dephasing = true;
  ControlPulse p = ControlPulse::zeros(ControlMode::kGlobal, 20, 50e-6, 4);
  for (Eigen::Index k = 0; k < 20; ++k) p.amplitudes(k, 0) = 2 * kPi * 2e3 * std::sin(0.5 * k);
  const auto shared = std::make_shared<const ControlPulse>(p);
  Gen g(56);
  const DensityMatrix out = simulate_sequence(g.density(4), {ShapedPulse{"p", shared}}, s, &noise);
  EXPECT_NEAR(out.matrix().trace().real(), 1.0, tol::kTrace);
  EXPECT_LT(hermitian_defect(out.matrix()), tol::kHermitian);
}

TEST(Measure, AccessibleReadoutEqualsTarget) {
  Gen g(57);
  const ReadoutPlan plan = plan_readout("XYY0");
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = g.density(4);
    EXPECT_NEAR(measure_fid_observable(rho, plan), expectation(rho, word_operator("XYY0")), 1e-12);
  }
  const DensityMatrix zero = DensityMatrix::from_pure(StateVector::zero(4));
  EXPECT_NEAR(measure_fid_observable(zero, plan), 0.0, 1e-15);
}

TEST(Measure, PpsIsEpsilonNormalized) {
  const double eps = 1e-5;
  const Circuit c = simplify_for_zero_input(build_eqs_circuit(EqsModel::kTwoQubit, 0.0036, kOmega)).widened(4);
  const UnitaryMatrix u = circuit_to_unitary(c);
  const DensityMatrix pure = apply_unitary(u, DensityMatrix::from_pure(StateVector::zero(4)));
  const DensityMatrix pps = apply_unitary(u, prepare_pps(eps));
  for (const char* target : {"ZYY0", "XYY0"}) {
    const ReadoutPlan plan = plan_readout(target);
    EXPECT_NEAR(measure_fid_observable(pps, plan, eps), measure_fid_observable(pure, plan), 1e-9);
  }
}

TEST(Measure, MaximallyMixedGivesZeroAndBadPlansThrow) {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
  EXPECT_NEAR(measure_fid_observable(mixed, plan_readout("ZIYY")), 0.0, 1e-15);
  ReadoutPlan bad{"IIII", "ZIII", "ZIII", 1};
  EXPECT_THROW(measure_fid_observable(mixed, bad), std::invalid_argument);
  EXPECT_THROW(read_accessible(mixed, bad), std::invalid_argument);
}

}  // namespace
}  // namespace eqs
