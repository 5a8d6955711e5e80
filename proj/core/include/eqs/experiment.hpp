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

// The two embedded-simulator experiments (concurrence of exp(-i w XX t)|00>
// and three-tangle of exp(-i w XXX t)|000>) run at four levels:
//
//   ideal    exact evolution of the embedded state under the embedded Hamiltonian
//   circuit  the simplified CNOT/R_y circuit on the 4-spin register
//   pulse    hard R_y on the ancilla, a GRAPE entangler and GRAPE readout
//            rotations, noiseless
//   noisy    the pulse level from a pseudo-pure state with preparation error,
//            T2 dephasing and Gaussian readout noise, with error bars
//
// Every level reads the embedded observables through the readout planner, so
// each value is an FID-accessible measurement after a rotation word.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqs/circuits.hpp"
#include "eqs/errorbars.hpp"
#include "eqs/grape.hpp"
#include "eqs/nmr.hpp"
#include "eqs/spin_system.hpp"

namespace eqs {

enum class ExperimentKind { kConcurrence, kThreeTangle };
enum class SimulationLevel { kIdeal, kCircuit, kPulse, kNoisy };

ExperimentKind parse_experiment(std::string_view name);  // "concurrence" | "three-tangle"
SimulationLevel parse_level(std::string_view name);      // "ideal" | "circuit" | "pulse" | "noisy"
std::string to_string(ExperimentKind kind);
std::string to_string(SimulationLevel level);
EqsModel model_for(ExperimentKind kind);

struct TimeGrid {
  double start_s = 0.4e-3;
  double stop_s = 19.6e-3;
  double step_s = 0.8e-3;

  /// start + k * step for every k with the point not past stop (up to a
  /// relative 1e-9 of the step). Throws when that yields no points.
  std::vector<double> points() const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kConcurrence;
  double omega = 2.0 * 3.14159265358979323846 * 25.0;  // rad/s
  TimeGrid grid;
  SimulationLevel level = SimulationLevel::kIdeal;
  /// Required at the pulse and noisy levels.
  std::optional<SpinSystem> molecule;
  NoiseModel noise{1e-5, 0.013, true};
  /// Standard deviation of the Gaussian noise added to each normalized readout.
  double readout_sigma = 0.005;
  BoundCombination combination = BoundCombination::kAdditive;
  std::uint64_t seed = 1;
  /// GRAPE settings; the pulse width is replaced per pulse by the budgets below.
  OptimizerConfig grape;
  /// Entangler budget; 0 selects 15 ms for concurrence and 30 ms for three-tangle.
  double entangler_budget_s = 0.0;
  double readout_budget_s = 1e-3;
  /// Pulse cache. Pulses found here are reused when they still reach the
  /// target fidelity on the configured molecule; new ones are written back.
  std::optional<std::filesystem::path> pulse_dir;

  void validate() const;
};

struct TimeSeriesRecord {
  double t_s = 0.0;
  std::vector<double> expectations;
  std::vector<double> sigmas;
  double monotone = 0.0;
  double monotone_sigma = 0.0;
  double reference = 0.0;
};

struct PulseReport {
  std::string label;
  double duration_s = 0.0;
  int segments = 0;
  /// Fidelity on the GRAPE target (subspace fidelity for the entangler).
  double fidelity = 0.0;
  /// Readout pulses only: fidelity restricted to the states the entangler
  /// can produce, used in the level-coherence bound.
  double reachable_fidelity = 0.0;
  bool from_cache = false;
};

struct PulseLibrary {
  std::shared_ptr<const ControlPulse> entangler;
  std::map<std::string, std::shared_ptr<const ControlPulse>> readouts;  // by rotation word
  std::vector<PulseReport> reports;
  /// 2 (sqrt(4 (1 - F_ent)) + max_w sqrt(4 (1 - F_w))): a bound on
  /// |pulse - circuit| for every expectation of an observable with norm <= 1.
  double expectation_bound = 0.0;
};

struct ExperimentResult {
  ExperimentKind experiment = ExperimentKind::kConcurrence;
  SimulationLevel level = SimulationLevel::kIdeal;
  /// Embedded observables in column order (ZYY, XYY or the six tangle words).
  std::vector<std::string> observables;
  std::vector<TimeSeriesRecord> records;
  /// Distinct embedded observables evaluated at each time point.
  std::size_t observables_per_point = 0;
  /// Distinct readout rotations, i.e. runs of the simulator, per time point.
  std::size_t runs_per_point = 0;
  std::optional<ErrorBudget> budget;
  std::vector<PulseReport> pulses;
  /// Pulse and noisy levels: PulseLibrary::expectation_bound.
  double level_bound = 0.0;
};

/// Readout plans for the experiment, in observable order. The concurrence
/// observables carry a |0><0| projector on the spectator spin.
std::vector<ReadoutPlan> experiment_plans(ExperimentKind kind);

/// |sin 2wt| or sin^2(2wt).
double analytic_reference(ExperimentKind kind, double omega, double t);

/// Simplified circuit for time t, widened to the 4-spin register.
Circuit experiment_circuit(ExperimentKind kind, double t, double omega, std::size_t register_size = 4);

/// Synthesizes (or loads) the entangler and readout pulses on `logical_sys`.
/// GRAPE non-convergence is rethrown as ConvergenceError naming the pulse.
PulseLibrary synthesize_pulses(ExperimentKind kind, const SpinSystem& logical_sys, const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Header `t_s,<obs>...,sigma_<obs>...,monotone,monotone_sigma,reference`,
/// then one row per record. Throws on empty records.
void emit_csv(std::ostream& out, const ExperimentResult& result);
void emit_csv(const std::filesystem::path& path, const ExperimentResult& result);

}  // namespace eqs
