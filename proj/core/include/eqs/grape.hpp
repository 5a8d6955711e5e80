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

// Gradient ascent pulse engineering for piecewise-constant shaped pulses.
//
// During segment k the register evolves under
//   H_k = H_int + sum_c u_{k,c} H_c,
// where each channel contributes (u_x sum_j w_j sigma_x^j + u_y sum_j w_j sigma_y^j) / 2,
// so an x amplitude u held for dt nutates a resonant spin by u * dt radians.
// In global mode one channel drives every spin (weights w_j, default 1); in
// selective mode each spin has its own channel.
//
// Fidelity is the phase-invariant overlap |Tr(W^dagger U Q)| / k, where Q is
// an orthonormal d x k input basis (the identity for full-unitary targets)
// and W = V Q for the target V.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eqs/qcore.hpp"
#include "eqs/spin_system.hpp"

namespace eqs {

enum class ControlMode { kGlobal, kSelective };

struct ControlPulse {
  double dt_s = 0.0;
  /// segments x (2 * channels); columns are x_0, y_0, x_1, y_1, ... in rad/s.
  RMatrix amplitudes;
  ControlMode mode = ControlMode::kGlobal;
  /// Global-mode drive weight per spin; empty means all ones.
  std::vector<double> weights;

  Eigen::Index segments() const { return amplitudes.rows(); }
  std::size_t channels() const { return static_cast<std::size_t>(amplitudes.cols() / 2); }
  double duration_s() const { return dt_s * static_cast<double>(segments()); }

  static ControlPulse zeros(ControlMode mode, Eigen::Index segments, double dt_s, std::size_t spins);

  friend bool operator==(const ControlPulse&, const ControlPulse&) = default;
};

/// Control Hamiltonians H_c, one per amplitude column.
std::vector<CMatrix> control_operators(const ControlPulse& pulse, const SpinSystem& sys);

/// U_N ... U_1 with U_k = exp(-i H_k dt).
UnitaryMatrix pulse_to_unitary(const ControlPulse& pulse, const SpinSystem& sys);

/// Per-segment propagators in time order.
std::vector<UnitaryMatrix> segment_propagators(const ControlPulse& pulse, const SpinSystem& sys);

/// |Tr(target^dagger u)| / 2^n.
double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& target);

class GrapeTarget {
 public:
  /// Full-unitary target.
  explicit GrapeTarget(UnitaryMatrix target);
  /// Only the action on span(input_basis) matters; columns must be orthonormal.
  GrapeTarget(UnitaryMatrix target, CMatrix input_basis);

  const UnitaryMatrix& unitary() const { return target_; }
  const CMatrix& input_basis() const { return inputs_; }
  const CMatrix& output_basis() const { return outputs_; }
  Eigen::Index subspace_dimension() const { return inputs_.cols(); }
  std::size_t num_qubits() const { return target_.num_qubits(); }

  double fidelity(const CMatrix& u) const;

 private:
  UnitaryMatrix target_;
  CMatrix inputs_;
  CMatrix outputs_;
};

struct FidelityGradient {
  double fidelity = 0.0;
  /// Same shape as ControlPulse::amplitudes; d fidelity / d u in 1/(rad/s).
  RMatrix gradient;
};

/// Exact gradient of the fidelity with respect to every amplitude, via
/// forward/backward propagator chains and the eigenbasis derivative of each
/// segment exponential.
FidelityGradient fidelity_and_gradient(const ControlPulse& pulse, const SpinSystem& sys,
                                       const GrapeTarget& target);
RMatrix gradient(const ControlPulse& pulse, const SpinSystem& sys, const GrapeTarget& target);

struct OptimizerConfig {
  double target_fidelity = 0.995;
  double pulse_width_s = 1e-3;
  double segment_dt_s = 50e-6;
  double amplitude_bound = 2.0 * 3.14159265358979323846 * 1e4;  // rad/s
  ControlMode mode = ControlMode::kGlobal;
  int max_iterations = 400;
  int restarts = 4;
  std::uint64_t seed = 1;
  /// Initial random amplitudes are uniform in +-initial_scale * bound.
  double initial_scale = 0.1;
  /// Largest first step, in units of the amplitude bound.
  double initial_step = 0.05;
  /// Quasi-Newton (L-BFGS) directions; plain gradient ascent when false.
  bool use_lbfgs = true;
  int lbfgs_memory = 12;

  void validate() const;
};

struct OptimizationResult {
  ControlPulse pulse;
  double fidelity = 0.0;
  int iterations = 0;
  int restart = 0;
  bool converged = false;
  /// Fidelity after each accepted iteration of the returned trajectory.
  std::vector<double> history;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, OptimizationResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const OptimizationResult& best() const { return best_; }

 private:
  OptimizationResult best_;
};

/// Runs up to cfg.restarts seeded trajectories and returns the first that
/// reaches cfg.target_fidelity. Throws ConvergenceError (carrying the best
/// pulse found) when none does. Deterministic for a fixed config.
OptimizationResult optimize(const GrapeTarget& target, const SpinSystem& sys, const OptimizerConfig& cfg,
                            const std::optional<ControlPulse>& initial_guess = std::nullopt);

/// Delimited text: comment header with dt, N and duration, then
/// `index,x_rad_s,y_rad_s` rows (more column pairs in selective mode).
void write_pulse(std::ostream& out, const ControlPulse& pulse);
ControlPulse read_pulse(std::istream& in);

}  // namespace eqs
