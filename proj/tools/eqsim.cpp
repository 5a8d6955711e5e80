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

// eqsim: run the embedded-simulator experiments, synthesize GRAPE pulses,
// benchmark tomography and print circuits.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eqs/circuits.hpp"
#include "eqs/experiment.hpp"
#include "eqs/grape.hpp"
#include "eqs/nmr.hpp"
#include "eqs/spin_system.hpp"
#include "eqs/tomography.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

eqs::SpinSystem molecule_or_default(const std::string& path) {
  return path.empty() ? eqs::synthetic_crotonic_acid() : eqs::load_spin_system(path);
}

struct RunOptions {
  std::string experiment = "concurrence";
  std::string level = "ideal";
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
  std::string pulse_dir;
  double omega_hz = 25.0;
  double t_start_ms = 0.4;
  double t_stop_ms = 19.6;
  double t_step_ms = 0.8;
  double polarization = 1e-5;
  double pps_infidelity = 0.013;
  bool no_t2 = false;
  double readout_sigma = 0.005;
  bool quadrature = false;
  double fidelity = 0.995;
};

int run_command(const RunOptions& o) {
  eqs::ExperimentConfig cfg;
  cfg.experiment = eqs::parse_experiment(o.experiment);
  cfg.level = eqs::parse_level(o.level);
  cfg.omega = 2.0 * kPi * o.omega_hz;
  cfg.grid = {o.t_start_ms * 1e-3, o.t_stop_ms * 1e-3, o.t_step_ms * 1e-3};
  if (!o.config.empty()) cfg.molecule = eqs::load_spin_system(o.config);
  cfg.noise = {o.polarization, o.pps_infidelity, !o.no_t2};
  cfg.readout_sigma = o.readout_sigma;
  cfg.combination = o.quadrature ? eqs::BoundCombination::kQuadrature : eqs::BoundCombination::kAdditive;
  cfg.seed = o.seed;
  cfg.grape.seed = o.seed;
  cfg.grape.target_fidelity = o.fidelity;
  if (!o.pulse_dir.empty()) cfg.pulse_dir = o.pulse_dir;

  const eqs::ExperimentResult result = eqs::run_experiment(cfg);
  if (o.out.empty() || o.out == "-") {
    eqs::emit_csv(std::cout, result);
  } else {
    eqs::emit_csv(o.out, result);
  }

  std::cerr << eqs::to_string(result.experiment) << " at level " << eqs::to_string(result.level) << ": "
            << result.records.size() << " points, " << result.observables_per_point << " observables and "
            << result.runs_per_point << " readout settings per point\n";
  for (const eqs::PulseReport& p : result.pulses) {
    std::fprintf(stderr, "  pulse %-16s %7.3f ms  F = %.5f%s\n", p.label.c_str(), p.duration_s * 1e3, p.fidelity,
                 p.from_cache ? " (cached)" : "");
  }
  if (result.level == eqs::SimulationLevel::kPulse || result.level == eqs::SimulationLevel::kNoisy) {
    std::fprintf(stderr, "  pulse-vs-circuit expectation bound %.4f\n", result.level_bound);
  }
  if (result.budget) {
    std::fprintf(stderr, "  discrepancy %.4f + preparation %.4f -> bound %.4f, sigma %.5f\n",
                 result.budget->model_discrepancy, result.budget->preparation_infidelity, result.budget->total_bound,
                 result.budget->sigma);
  }
  return 0;
}

struct GrapeOptions {
  std::string target = "cnot";
  double budget_ms = 15.0;
  double dt_us = 50.0;
  double fidelity = 0.995;
  std::string config;
  std::uint64_t seed = 1;
  int iterations = 400;
  int restarts = 4;
  bool selective = false;
  std::string out;
};

// Targets: cnot (C3 -> C4 on the two-spin subsystem), entangler-2q,
// entangler-3q, or a four-letter readout rotation word over {I, X, Y, y}.
int grape_command(const GrapeOptions& o) {
  const eqs::SpinSystem molecule = molecule_or_default(o.config);
  eqs::OptimizerConfig cfg;
  cfg.pulse_width_s = o.budget_ms * 1e-3;
  cfg.segment_dt_s = o.dt_us * 1e-6;
  cfg.target_fidelity = o.fidelity;
  cfg.seed = o.seed;
  cfg.max_iterations = o.iterations;
  cfg.restarts = o.restarts;
  cfg.mode = o.selective ? eqs::ControlMode::kSelective : eqs::ControlMode::kGlobal;

  std::optional<eqs::GrapeTarget> target;
  eqs::SpinSystem sys;
  if (o.target == "cnot") {
    const std::size_t spins[] = {molecule.index_of("C3"), molecule.index_of("C4")};
    sys = molecule.subsystem(spins);
    eqs::Circuit c(2);
    c.add(eqs::Cnot{0, 1});
    target.emplace(eqs::circuit_to_unitary(c));
  } else {
    const eqs::Circuit layout = eqs::experiment_circuit(eqs::ExperimentKind::kThreeTangle, 0.0, 1.0);
    sys = eqs::logical_register(layout, molecule);
    if (o.target == "entangler-2q" || o.target == "entangler-3q") {
      eqs::Circuit c(4);
      c.add(eqs::Cnot{0, 1});
      c.add(eqs::Cnot{0, 2});
      if (o.target == "entangler-3q") c.add(eqs::Cnot{0, 3});
      eqs::CMatrix q = eqs::CMatrix::Zero(16, 2);
      q(0, 0) = 1.0;
      q(8, 1) = 1.0;
      target.emplace(eqs::circuit_to_unitary(c), q);
    } else if (o.target.size() == sys.size()) {
      target.emplace(eqs::readout_unitary(o.target));
    } else {
      throw std::invalid_argument("unknown GRAPE target '" + o.target + "'");
    }
  }

  const eqs::OptimizationResult r = eqs::optimize(*target, sys, cfg);
  std::fprintf(stderr, "%s: F = %.6f after %d iterations (restart %d), %.3f ms, %lld segments\n", o.target.c_str(),
               r.fidelity, r.iterations, r.restart, r.pulse.duration_s() * 1e3,
               static_cast<long long>(r.pulse.segments()));
  if (o.out.empty() || o.out == "-") {
    eqs::write_pulse(std::cout, r.pulse);
  } else {
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot open " + o.out);
    eqs::write_pulse(out, r.pulse);
  }
  return 0;
}

struct TomographyOptions {
  std::string state = "pps";
  double epsilon = 1e-5;
  double infidelity = 0.013;
  std::string config;
  std::string out;
};

int tomography_command(const TomographyOptions& o) {
  std::optional<eqs::DensityMatrix> rho;
  double eps = o.epsilon;
  if (o.state == "pps") {
    rho = eqs::prepare_pps(o.epsilon, 4, o.infidelity);
  } else if (o.state == "thermal") {
    rho = eqs::thermal_state(molecule_or_default(o.config), o.epsilon);
  } else if (o.state == "zero") {
    rho = eqs::DensityMatrix::from_pure(eqs::StateVector::zero(4));
    eps = 1.0;
  } else {
    throw std::invalid_argument("unknown state '" + o.state + "' (pps | thermal | zero)");
  }
  const eqs::TomographyResult tomo = eqs::full_state_tomography(*rho);
  const eqs::DensityMatrix recon(tomo.reconstructed);
  const eqs::StateFidelity f = eqs::state_fidelity(recon, eqs::StateVector::zero(4), eps);
  std::fprintf(stderr, "%zu observables, min eigenvalue %.3g, fidelity raw %.8f, normalized %.6f\n",
               tomo.observable_count(), tomo.min_eigenvalue, f.raw, f.normalized);
  if (o.out.empty() || o.out == "-") {
    eqs::write_expectations(std::cout, tomo.expectations);
  } else {
    std::ofstream out(o.out);
    if (!out) throw std::runtime_error("cannot open " + o.out);
    eqs::write_expectations(out, tomo.expectations);
  }
  return 0;
}

struct CircuitOptions {
  std::string model = "2q";
  double t_ms = 0.4;
  double omega_hz = 25.0;
  bool simplify = false;
  bool native = false;
  bool pulses = false;
  std::string config;
};

int circuit_command(const CircuitOptions& o) {
  eqs::Circuit c = eqs::build_eqs_circuit(eqs::parse_model(o.model), o.t_ms * 1e-3, 2.0 * kPi * o.omega_hz);
  if (o.simplify) c = eqs::simplify_for_zero_input(c);
  const eqs::SpinSystem molecule = molecule_or_default(o.config);
  c = c.widened(molecule.size());
  const eqs::SpinSystem sys = eqs::logical_register(c, molecule);
  if (o.pulses) {
    std::cout << eqs::to_text(eqs::compile_circuit(c, sys));
  } else if (o.native) {
    std::cout << eqs::to_text(eqs::to_native_gates(c, sys.j_hz));
  } else {
    std::cout << eqs::to_text(c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding quantum simulator toolkit"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment and write its time series as CSV");
  run_cmd->add_option("--experiment", run.experiment, "concurrence | three-tangle")->required();
  run_cmd->add_option("--level", run.level, "ideal | circuit | pulse | noisy")->required();
  run_cmd->add_option("--config", run.config, "Molecule config (JSON); required for pulse and noisy levels");
  run_cmd->add_option("--seed", run.seed, "Seed for GRAPE restarts and readout noise");
  run_cmd->add_option("--out", run.out, "Output CSV path; stdout when omitted");
  run_cmd->add_option("--pulse-dir", run.pulse_dir, "Directory caching synthesized pulses");
  run_cmd->add_option("--omega-hz", run.omega_hz, "omega / 2 pi");
  run_cmd->add_option("--t-start-ms", run.t_start_ms);
  run_cmd->add_option("--t-stop-ms", run.t_stop_ms);
  run_cmd->add_option("--t-step-ms", run.t_step_ms);
  run_cmd->add_option("--polarization", run.polarization, "PPS polarization epsilon");
  run_cmd->add_option("--pps-infidelity", run.pps_infidelity, "Preparation error of the PPS");
  run_cmd->add_flag("--no-t2", run.no_t2, "Disable T2 dephasing at the noisy level");
  run_cmd->add_option("--readout-sigma", run.readout_sigma, "Gaussian readout noise per expectation");
  run_cmd->add_flag("--quadrature", run.quadrature, "Combine error-bar terms in quadrature");
  run_cmd->add_option("--fidelity", run.fidelity, "GRAPE target fidelity");

  GrapeOptions grape;
  CLI::App* grape_cmd = app.add_subcommand("grape", "Synthesize a shaped pulse and write it as CSV");
  grape_cmd->add_option("--target", grape.target, "cnot | entangler-2q | entangler-3q | rotation word (e.g. YyXX)")
      ->required();
  grape_cmd->add_option("--budget-ms", grape.budget_ms, "Pulse duration");
  grape_cmd->add_option("--dt-us", grape.dt_us, "Segment length");
  grape_cmd->add_option("--fidelity", grape.fidelity, "Target fidelity");
  grape_cmd->add_option("--config", grape.config, "Molecule config; built-in synthetic molecule when omitted");
  grape_cmd->add_option("--seed", grape.seed);
  grape_cmd->add_option("--iterations", grape.iterations);
  grape_cmd->add_option("--restarts", grape.restarts);
  grape_cmd->add_flag("--selective", grape.selective, "One control channel per spin");
  grape_cmd->add_option("--out", grape.out, "Pulse CSV path; stdout when omitted");

  TomographyOptions tomo;
  CLI::App* tomo_cmd = app.add_subcommand("tomography", "Full-state tomography of a prepared state");
  tomo_cmd->add_option("--state", tomo.state, "pps | thermal | zero");
  tomo_cmd->add_option("--epsilon", tomo.epsilon);
  tomo_cmd->add_option("--infidelity", tomo.infidelity, "PPS preparation error");
  tomo_cmd->add_option("--config", tomo.config, "Molecule config for the thermal state");
  tomo_cmd->add_option("--out", tomo.out, "Expectation CSV path; stdout when omitted");

  CircuitOptions circ;
  CLI::App* circ_cmd = app.add_subcommand("circuit", "Print the embedded-evolution circuit");
  circ_cmd->add_option("--model", circ.model, "2q | 3q");
  circ_cmd->add_option("--t-ms", circ.t_ms);
  circ_cmd->add_option("--omega-hz", circ.omega_hz);
  circ_cmd->add_flag("--simplify", circ.simplify, "Drop CNOTs that act trivially on |0...0>");
  circ_cmd->add_flag("--native", circ.native, "Decompose into NMR-native gates");
  circ_cmd->add_flag("--pulses", circ.pulses, "Compile to hard pulses and refocused delays");
  circ_cmd->add_option("--config", circ.config, "Molecule config; built-in synthetic molecule when omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run_command(run);
    if (*grape_cmd) return grape_command(grape);
    if (*tomo_cmd) return tomography_command(tomo);
    if (*circ_cmd) return circuit_command(circ);
  } catch (const std::exception& e) {
    std::cerr << "eqsim: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
