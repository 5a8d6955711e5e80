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

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eqs/circuits.hpp"
#include "eqs/grape.hpp"
#include "eqs/tolerances.hpp"
#include "support/generators.hpp"

namespace eqs {
namespace {

using testing::Gen;

constexpr double kPi = std::numbers::pi;

SpinSystem pair_c3_c4() {
  const SpinSystem mol = synthetic_crotonic_acid();
  const std::size_t idx[] = {mol.index_of("C3"), mol.index_of("C4")};
  return mol.subsystem(idx);
}

SpinSystem free_spins(std::size_t n) {
  SpinSystem s;
  for (std::size_t k = 0; k < n; ++k) s.labels.push_back("S" + std::to_string(k));
  s.shifts_hz.assign(n, 0.0);
  s.j_hz = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  s.t2_s.assign(n, 1.0);
  return s;
}

UnitaryMatrix cnot01() {
  Circuit c(2);
  c.add(Cnot{0, 1});
  return circuit_to_unitary(c);
}

ControlPulse random_pulse(Gen& g, ControlMode mode, Eigen::Index n, double dt, std::size_t spins, double scale) {
  ControlPulse p = ControlPulse::zeros(mode, n, dt, spins);
  for (Eigen::Index i = 0; i < p.amplitudes.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.amplitudes.cols(); ++j) p.amplitudes(i, j) = g.uniform(-scale, scale);
  }
  return p;
}

// Central differences on every amplitude. The step is 1e-6 of the amplitude
// bound; a step of 1e-6 rad/s would leave the quotient dominated by rounding.
constexpr double kFdStep = 1e-6 * 2 * kPi * 1e4;
RMatrix finite_difference(const ControlPulse& p, const SpinSystem& sys, const GrapeTarget& target, double h) {
  RMatrix out(p.amplitudes.rows(), p.amplitudes.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      ControlPulse up = p, down = p;
      up.amplitudes(i, j) += h;
      down.amplitudes(i, j) -= h;
      out(i, j) = (target.fidelity(pulse_to_unitary(up, sys).matrix()) -
                   target.fidelity(pulse_to_unitary(down, sys).matrix())) /
                  (2 * h);
    }
  }
  return out;
}

TEST(PulseToUnitary, ZeroPulseIsFreeEvolution) {
  const SpinSystem sys = pair_c3_c4();
  const ControlPulse p = ControlPulse::zeros(ControlMode::kGlobal, 30, 50e-6, 2);
  const UnitaryMatrix free = matrix_exponential(internal_hamiltonian(sys), 30 * 50e-6);
  EXPECT_LT((pulse_to_unitary(p, sys).matrix() - free.matrix()).norm(), 1e-10);
}

TEST(PulseToUnitary, SingleSegmentPiRotation) {
  const SpinSystem sys = free_spins(2);
  ControlPulse p = ControlPulse::zeros(ControlMode::kGlobal, 1, 1e-4, 2);
  p.amplitudes(0, 0) = kPi / 1e-4;
  const UnitaryMatrix xx = circuit_to_unitary(Circuit(2).add(Rotation{Axis::kX, 0, kPi}).add(Rotation{Axis::kX, 1, kPi}));
  EXPECT_NEAR(phase_invariant_overlap(pulse_to_unitary(p, sys).matrix(), xx.matrix()), 1.0, 1e-12);
}

TEST(PulseToUnitary, RefinementConsistency) {
  const SpinSystem sys = pair_c3_c4();
  Gen g(61);
  const ControlPulse p = random_pulse(g, ControlMode::kGlobal, 20, 50e-6, 2, 2 * kPi * 5e3);
  ControlPulse fine = ControlPulse::zeros(ControlMode::kGlobal, 40, 25e-6, 2);
  for (Eigen::Index k = 0; k < 40; ++k) fine.amplitudes.row(k) = p.amplitudes.row(k / 2);
  EXPECT_LT((pulse_to_unitary(p, sys).matrix() - pulse_to_unitary(fine, sys).matrix()).norm(), 1e-10);
}

TEST(PulseToUnitary, MatchesFrozenOracle) {
  const auto& o = testing::oracles();
  const std::vector<double> ux = o["pulse_x"], uy = o["pulse_y"];
  ControlPulse p = ControlPulse::zeros(ControlMode::kGlobal, static_cast<Eigen::Index>(ux.size()), o["pulse_dt_s"], 2);
  for (std::size_t k = 0; k < ux.size(); ++k) {
    p.amplitudes(static_cast<Eigen::Index>(k), 0) = ux[k];
    p.amplitudes(static_cast<Eigen::Index>(k), 1) = uy[k];
  }
  const UnitaryMatrix u = pulse_to_unitary(p, pair_c3_c4());
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      const auto& e = o["pulse_unitary"][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      EXPECT_NEAR(u.matrix()(i, j).real(), e[0].get<double>(), 1e-10);
      EXPECT_NEAR(u.matrix()(i, j).imag(), e[1].get<double>(), 1e-10);
    }
  }
  EXPECT_NEAR(fidelity(u, cnot01()), o["pulse_cnot_fidelity"].get<double>(), 1e-10);
}

TEST(PulseToUnitary, AlwaysUnitary) {
  const SpinSystem sys = synthetic_crotonic_acid();
  Gen g(62);
  for (int trial = 0; trial < 5; ++trial) {
    const ControlPulse p = random_pulse(g, trial % 2 ? ControlMode::kSelective : ControlMode::kGlobal, 10, 50e-6, 4,
                                        2 * kPi * 1e4);
    const CMatrix u = pulse_to_unitary(p, sys).matrix();
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Fidelity, Examples) {
  Gen g(63);
  const UnitaryMatrix u = matrix_exponential(g.hermitian(2), 1.0);
  EXPECT_NEAR(fidelity(u, u), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(UnitaryMatrix(std::exp(Complex(0, 0.7)) * u.matrix()), u), 1.0, 1e-14);
  const UnitaryMatrix x(letter_matrix('X'));
  EXPECT_NEAR(fidelity(UnitaryMatrix::identity(1), x), 0.0, 1e-15);
  EXPECT_THROW(fidelity(UnitaryMatrix::identity(1), UnitaryMatrix::identity(2)), std::invalid_argument);
}

TEST(Gradient, MatchesFiniteDifferencesGlobal) {
  const SpinSystem sys = pair_c3_c4();
  const GrapeTarget target(cnot01());
  Gen g(64);
  for (Eigen::Index n : {5, 20, 50}) {
    const ControlPulse p = random_pulse(g, ControlMode::kGlobal, n, 50e-6, 2, 2 * kPi * 5e3);
    const RMatrix analytic = gradient(p, sys, target);
    const RMatrix numeric = finite_difference(p, sys, target, kFdStep);
    EXPECT_LT((analytic - numeric).norm() / numeric.norm(), 1e-5) << "N=" << n;
  }
}

TEST(Gradient, MatchesFiniteDifferencesSelectiveAndSubspace) {
  const SpinSystem sys = pair_c3_c4();
  CMatrix basis = CMatrix::Zero(4, 2);
  basis(0, 0) = 1.0;
  basis(2, 1) = 1.0;
  const GrapeTarget target(cnot01(), basis);
  Gen g(65);
  ControlPulse p = random_pulse(g, ControlMode::kSelective, 12, 50e-6, 2, 2 * kPi * 5e3);
  const RMatrix analytic = gradient(p, sys, target);
  const RMatrix numeric = finite_difference(p, sys, target, kFdStep);
  EXPECT_LT((analytic - numeric).norm() / numeric.norm(), 1e-5);
}

TEST(Gradient, SingleSpin) {
  const SpinSystem mol = synthetic_crotonic_acid();
  const std::size_t idx[] = {mol.index_of("C2")};
  const SpinSystem one = mol.subsystem(idx);
  const GrapeTarget target(UnitaryMatrix(rotation_matrix(Axis::kY, kPi / 2)));
  Gen g(66);
  const ControlPulse p = random_pulse(g, ControlMode::kGlobal, 8, 50e-6, 1, 2 * kPi * 5e3);
  const RMatrix numeric = finite_difference(p, one, target, kFdStep);
  EXPECT_LT((gradient(p, one, target) - numeric).norm() / numeric.norm(), 1e-5);
}

TEST(Gradient, ZeroDurationIsZero) {
  const SpinSystem sys = pair_c3_c4();
  Gen g(67);
  ControlPulse p = random_pulse(g, ControlMode::kGlobal, 6, 50e-6, 2, 2 * kPi * 5e3);
  p.dt_s = 0.0;
  const FidelityGradient fg = fidelity_and_gradient(p, sys, GrapeTarget(cnot01()));
  EXPECT_EQ(fg.gradient.norm(), 0.0);
  EXPECT_NEAR(fg.fidelity, 0.5, 1e-15);  // |Tr CNOT| / 4
}

TEST(Gradient, StationaryAtFidelityOne) {
  const SpinSystem sys = pair_c3_c4();
  Gen g(68);
  const ControlPulse p = random_pulse(g, ControlMode::kGlobal, 10, 50e-6, 2, 2 * kPi * 5e3);
  const GrapeTarget target(pulse_to_unitary(p, sys));
  const FidelityGradient fg = fidelity_and_gradient(p, sys, target);
  EXPECT_NEAR(fg.fidelity, 1.0, 1e-12);
  EXPECT_LT(fg.gradient.norm(), 1e-6);
}

TEST(GrapeTarget, Validation) {
  EXPECT_THROW(GrapeTarget(cnot01(), CMatrix::Ones(4, 1)), std::invalid_argument);
  EXPECT_THROW(GrapeTarget(cnot01(), CMatrix::Identity(2, 2)), std::invalid_argument);
  EXPECT_THROW(fidelity_and_gradient(ControlPulse::zeros(ControlMode::kGlobal, 2, 1e-5, 2), synthetic_crotonic_acid(),
                                     GrapeTarget(cnot01())),
               std::invalid_argument);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.target_fidelity = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.target_fidelity = 1.01;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.amplitude_bound = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.restarts = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

OptimizerConfig cnot_config() {
  OptimizerConfig cfg;
  cfg.pulse_width_s = 15e-3;
  cfg.seed = 7;
  return cfg;
}

TEST(Optimize, CnotWithin15ms) {
  const auto start = std::chrono::steady_clock::now();
  const OptimizationResult r = optimize(GrapeTarget(cnot01()), pair_c3_c4(), cnot_config());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.fidelity, 0.995);
  EXPECT_LE(r.pulse.duration_s(), 15e-3 + 1e-12);
  EXPECT_LE(r.pulse.amplitudes.cwiseAbs().maxCoeff(), cnot_config().amplitude_bound);
  EXPECT_NEAR(fidelity(pulse_to_unitary(r.pulse, pair_c3_c4()), cnot01()), r.fidelity, 1e-12);
  EXPECT_LT(seconds, 300.0);
}

TEST(Optimize, MonotoneHistoryAndDeterminism) {
  const OptimizationResult a = optimize(GrapeTarget(cnot01()), pair_c3_c4(), cnot_config());
  for (std::size_t k = 1; k < a.history.size(); ++k) EXPECT_GE(a.history[k], a.history[k - 1]);
  const OptimizationResult b = optimize(GrapeTarget(cnot01()), pair_c3_c4(), cnot_config());
  EXPECT_TRUE(a.pulse == b.pulse);
  EXPECT_EQ(a.history, b.history);
}

TEST(Optimize, PlainAscentAlsoMonotone) {
  OptimizerConfig cfg = cnot_config();
  cfg.use_lbfgs = false;
  cfg.max_iterations = 30;
  cfg.restarts = 1;
  cfg.target_fidelity = 0.9999;
  try {
    const OptimizationResult r = optimize(GrapeTarget(cnot01()), pair_c3_c4(), cfg);
    for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_GE(r.history[k], r.history[k - 1]);
  } catch (const ConvergenceError& e) {
    const auto& h = e.best().history;
    ASSERT_FALSE(h.empty());
    for (std::size_t k = 1; k < h.size(); ++k) EXPECT_GE(h[k], h[k - 1]);
  }
}

TEST(Optimize, ReadoutWordWithin1ms) {
  const SpinSystem mol = synthetic_crotonic_acid();
  const std::size_t order[] = {mol.index_of("C3"), mol.index_of("C4"), mol.index_of("C2"), mol.index_of("C1")};
  const SpinSystem logical = mol.subsystem(order);
  OptimizerConfig cfg;
  cfg.pulse_width_s = 1e-3;
  const OptimizationResult r = optimize(GrapeTarget(readout_unitary("IXXI")), logical, cfg);
  EXPECT_GE(r.fidelity, 0.995);
  EXPECT_NEAR(r.pulse.duration_s(), 1e-3, 1e-12);
}

TEST(Optimize, IdentityOnFreeSpinsIsImmediate) {
  OptimizerConfig cfg;
  cfg.pulse_width_s = 2e-3;
  const OptimizationResult r =
      optimize(GrapeTarget(UnitaryMatrix::identity(2)), free_spins(2), cfg,
               ControlPulse::zeros(ControlMode::kGlobal, 40, 50e-6, 2));
  EXPECT_GE(r.fidelity, 0.9999);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Optimize, IdentityOnMoleculeConverges) {
  OptimizerConfig cfg;
  cfg.pulse_width_s = 2e-3;
  cfg.target_fidelity = 0.9999;
  cfg.max_iterations = 1000;
  const OptimizationResult r = optimize(GrapeTarget(UnitaryMatrix::identity(2)), pair_c3_c4(), cfg);
  EXPECT_GE(r.fidelity, 0.9999);
}

TEST(Optimize, NonConvergenceIsReported) {
  OptimizerConfig cfg;
  cfg.pulse_width_s = 0.2e-3;  // far too short for a J-coupled gate
  cfg.max_iterations = 20;
  cfg.restarts = 2;
  try {
    optimize(GrapeTarget(cnot01()), pair_c3_c4(), cfg);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_LT(e.best().fidelity, 0.995);
    EXPECT_FALSE(e.best().converged);
    EXPECT_GT(e.best().pulse.segments(), 0);
  }
}

TEST(PulseIo, RoundTripIsExact) {
  Gen g(69);
  for (ControlMode mode : {ControlMode::kGlobal, ControlMode::kSelective}) {
    ControlPulse p = random_pulse(g, mode, 7, 50e-6, 3, 2 * kPi * 1e4);
    if (mode == ControlMode::kGlobal) p.weights = {1.0, 0.5, -0.25};
    std::stringstream s;
    write_pulse(s, p);
    const ControlPulse back = read_pulse(s);
    EXPECT_TRUE(back == p);
  }
  std::stringstream header;
  write_pulse(header, ControlPulse::zeros(ControlMode::kGlobal, 2, 50e-6, 1));
  EXPECT_NE(header.str().find("dt_s=5.0000000000000002e-05"), std::string::npos);
  EXPECT_NE(header.str().find("segments=2"), std::string::npos);
  EXPECT_NE(header.str().find("index,x_rad_s,y_rad_s"), std::string::npos);
  std::stringstream bad("# eqsim control pulse\nnot a pulse\n");
  EXPECT_THROW(read_pulse(bad), std::invalid_argument);
}

}  // namespace
}  // namespace eqs
