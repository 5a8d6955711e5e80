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

#include "eqs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "eqs/embedding.hpp"
#include "eqs/monotones.hpp"

namespace eqs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kRegister = 4;

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::vector<std::string> observable_words(ExperimentKind kind) {
  std::vector<std::string> out;
  if (kind == ExperimentKind::kConcurrence) {
    for (const PauliString& p : concurrence_observables()) out.push_back(p.word());
  } else {
    for (const PauliString& p : three_tangle_observables()) out.push_back(p.word());
  }
  return out;
}

double monotone_of(ExperimentKind kind, std::span<const double> v) {
  if (kind == ExperimentKind::kConcurrence) return concurrence_from_expectations(v[0], v[1]);
  return three_tangle_from_expectations(std::span<const double, 6>(v.data(), 6));
}

/// exp(-i w t X^n) acting on |0...0>, embedded, padded with |0> spectators.
DensityMatrix ideal_state(ExperimentKind kind, double omega, double t) {
  const std::size_t n = system_qubits(model_for(kind));
  const HermitianOperator h = pauli_matrix(PauliString(std::string(n, 'X'), omega));
  const HermitianOperator big_h = embed_hamiltonian(split_hamiltonian(h));
  StateVector big = evolve(embed_state(StateVector::zero(n)).state(), big_h, t);
  if (big.num_qubits() < kRegister) big = tensor(big, StateVector::zero(kRegister - big.num_qubits()));
  return DensityMatrix::from_pure(big);
}

DensityMatrix circuit_state(ExperimentKind kind, double omega, double t) {
  const UnitaryMatrix u = circuit_to_unitary(experiment_circuit(kind, t, omega, kRegister));
  return DensityMatrix::from_pure(apply_unitary(u, StateVector::zero(kRegister)));
}

/// Rotation words in first-use order, each with the plan indices it serves.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_by_rotation(const std::vector<ReadoutPlan>& plans) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == plans[k].rotation_word; });
    if (it == groups.end()) {
      groups.push_back({plans[k].rotation_word, {k}});
    } else {
      it->second.push_back(k);
    }
  }
  return groups;
}

struct PointMeasurement {
  std::vector<double> values;
  std::set<std::string> touched;
  std::size_t runs = 0;
};

PointMeasurement measure_ideal_rotations(const DensityMatrix& rho, const std::vector<ReadoutPlan>& plans) {
  PointMeasurement m;
  m.values.resize(plans.size());
  for (const auto& [word, members] : group_by_rotation(plans)) {
    const DensityMatrix rotated = apply_unitary(readout_unitary(word), rho);
    for (std::size_t k : members) {
      m.values[k] = read_accessible(rotated, plans[k]);
      m.touched.insert(plans[k].target_word);
    }
    ++m.runs;
  }
  return m;
}

PointMeasurement measure_pulses(const DensityMatrix& rho0, double theta, const std::vector<ReadoutPlan>& plans,
                                const PulseLibrary& lib, const SpinSystem& sys, const NoiseModel* noise,
                                double epsilon) {
  const PulseSequence evolution{HardPulse{{0}, PulseAxis::kY, std::remainder(theta, 2 * kPi)},
                                ShapedPulse{"entangler", lib.entangler}};
  const DensityMatrix evolved = simulate_sequence(rho0, evolution, sys, noise);
  PointMeasurement m;
  m.values.resize(plans.size());
  for (const auto& [word, members] : group_by_rotation(plans)) {
    const PulseSequence readout{ShapedPulse{"readout_" + word, lib.readouts.at(word)}};
    const DensityMatrix rotated = simulate_sequence(evolved, readout, sys, noise);
    for (std::size_t k : members) {
      m.values[k] = read_accessible(rotated, plans[k], epsilon);
      m.touched.insert(plans[k].target_word);
    }
    ++m.runs;
  }
  return m;
}

/// Gates after the R_y on the ancilla; t independent.
Circuit entangler_circuit(ExperimentKind kind) {
  const Circuit full = experiment_circuit(kind, 0.0, 1.0, kRegister);
  Circuit tail(full.num_qubits());
  tail.set_physical_map(full.physical_map());
  bool after = false;
  for (const Gate& g : full.gates()) {
    if (after) tail.add(g);
    if (const auto* r = std::get_if<Rotation>(&g); r && r->qubit == 0 && r->axis == Axis::kY) after = true;
  }
  return tail;
}

/// |0000> and |1000>: everything the ancilla rotation can produce.
CMatrix ancilla_subspace() {
  const Eigen::Index d = Eigen::Index{1} << kRegister;
  CMatrix q = CMatrix::Zero(d, 2);
  q(0, 0) = 1.0;
  q(d / 2, 1) = 1.0;
  return q;
}

std::shared_ptr<const ControlPulse> obtain_pulse(const std::string& label, const GrapeTarget& target,
                                                 const SpinSystem& sys, const OptimizerConfig& grape,
                                                 const std::optional<std::filesystem::path>& dir,
                                                 PulseReport& report) {
  const auto expected_segments = static_cast<Eigen::Index>(std::llround(grape.pulse_width_s / grape.segment_dt_s));
  std::optional<ControlPulse> cached;
  std::filesystem::path file;
  if (dir) {
    file = *dir / (label + ".csv");
    if (std::filesystem::exists(file)) {
      std::ifstream in(file);
      ControlPulse p = read_pulse(in);
      const std::size_t channels = grape.mode == ControlMode::kGlobal ? 1 : sys.size();
      if (p.segments() == expected_segments && p.channels() == channels && p.mode == grape.mode) cached = std::move(p);
    }
  }
  if (cached) {
    const double f = target.fidelity(pulse_to_unitary(*cached, sys).matrix());
    if (f >= grape.target_fidelity) {
      report.label = label;
      report.duration_s = cached->duration_s();
      report.segments = static_cast<int>(cached->segments());
      report.fidelity = f;
      report.from_cache = true;
      return std::make_shared<const ControlPulse>(std::move(*cached));
    }
  }
  OptimizationResult result;
  try {
    result = optimize(target, sys, grape, cached);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("synthesizing pulse '" + label + "': " + e.what(), e.best());
  }
  if (dir) {
    std::filesystem::create_directories(*dir);
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write pulse cache " + file.string());
    write_pulse(out, result.pulse);
  }
  report.label = label;
  report.duration_s = result.pulse.duration_s();
  report.segments = static_cast<int>(result.pulse.segments());
  report.fidelity = result.fidelity;
  return std::make_shared<const ControlPulse>(std::move(result.pulse));
}

}  // namespace

ExperimentKind parse_experiment(std::string_view name) {
  if (name == "concurrence") return ExperimentKind::kConcurrence;
  if (name == "three-tangle") return ExperimentKind::kThreeTangle;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "' (concurrence | three-tangle)");
}

SimulationLevel parse_level(std::string_view name) {
  if (name == "ideal") return SimulationLevel::kIdeal;
  if (name == "circuit") return SimulationLevel::kCircuit;
  if (name == "pulse") return SimulationLevel::kPulse;
  if (name == "noisy") return SimulationLevel::kNoisy;
  throw std::invalid_argument("unknown level '" + std::string(name) + "' (ideal | circuit | pulse | noisy)");
}

std::string to_string(ExperimentKind kind) {
  return kind == ExperimentKind::kConcurrence ? "concurrence" : "three-tangle";
}

std::string to_string(SimulationLevel level) {
  switch (level) {
    case SimulationLevel::kIdeal: return "ideal";
    case SimulationLevel::kCircuit: return "circuit";
    case SimulationLevel::kPulse: return "pulse";
    case SimulationLevel::kNoisy: return "noisy";
  }
  throw std::invalid_argument("unknown level");
}

EqsModel model_for(ExperimentKind kind) {
  return kind == ExperimentKind::kConcurrence ? EqsModel::kTwoQubit : EqsModel::kThreeQubit;
}

std::vector<double> TimeGrid::points() const {
  if (!std::isfinite(start_s) || !std::isfinite(stop_s) || !(step_s > 0.0) || start_s < 0.0) {
    throw std::invalid_argument("time grid needs finite start >= 0 and a positive step");
  }
  std::vector<double> out;
  for (long k = 0;; ++k) {
    const double t = start_s + static_cast<double>(k) * step_s;
    if (t > stop_s + 1e-9 * step_s) break;
    out.push_back(t);
  }
  if (out.empty()) throw std::invalid_argument("time grid has no points");
  return out;
}

void ExperimentConfig::validate() const {
  grid.points();
  if (!std::isfinite(omega)) throw std::invalid_argument("omega must be finite");
  if (!(readout_sigma >= 0.0)) throw std::invalid_argument("readout sigma must be >= 0");
  if (!(entangler_budget_s >= 0.0) || !(readout_budget_s > 0.0)) throw std::invalid_argument("pulse budgets must be positive");
  noise.validate();
  grape.validate();
  if (level == SimulationLevel::kPulse || level == SimulationLevel::kNoisy) {
    if (!molecule) throw std::invalid_argument("the " + to_string(level) + " level needs a molecule config");
    molecule->validate();
    if (molecule->size() != kRegister) throw std::invalid_argument("the molecule must have exactly 4 spins");
  }
}

std::vector<ReadoutPlan> experiment_plans(ExperimentKind kind) {
  std::vector<ReadoutPlan> plans;
  for (const std::string& w : observable_words(kind)) {
    const std::size_t spectators = kRegister - w.size();
    plans.push_back(plan_readout(PauliString(w), std::string(spectators, '0')));
  }
  return plans;
}

double analytic_reference(ExperimentKind kind, double omega, double t) {
  const double s = std::sin(2.0 * omega * t);
  return kind == ExperimentKind::kConcurrence ? std::abs(s) : s * s;
}

Circuit experiment_circuit(ExperimentKind kind, double t, double omega, std::size_t register_size) {
  return simplify_for_zero_input(build_eqs_circuit(model_for(kind), t, omega)).widened(register_size);
}

PulseLibrary synthesize_pulses(ExperimentKind kind, const SpinSystem& logical_sys, const ExperimentConfig& cfg) {
  PulseLibrary lib;
  const Circuit tail = entangler_circuit(kind);
  const UnitaryMatrix entangler_u = circuit_to_unitary(tail);
  const GrapeTarget entangler_target(entangler_u, ancilla_subspace());

  OptimizerConfig grape = cfg.grape;
  grape.pulse_width_s = cfg.entangler_budget_s > 0.0 ? cfg.entangler_budget_s
                        : kind == ExperimentKind::kConcurrence ? 15e-3
                                                                : 30e-3;
  PulseReport ent_report;
  const std::string ent_label = kind == ExperimentKind::kConcurrence ? "entangler_2q" : "entangler_3q";
  lib.entangler = obtain_pulse(ent_label, entangler_target, logical_sys, grape, cfg.pulse_dir, ent_report);
  lib.reports.push_back(ent_report);

  grape.pulse_width_s = cfg.readout_budget_s;
  const CMatrix reachable = entangler_u.matrix() * ancilla_subspace();
  double worst_readout = 0.0;
  for (const ReadoutPlan& plan : experiment_plans(kind)) {
    const std::string& word = plan.rotation_word;
    if (lib.readouts.count(word)) continue;
    PulseReport report;
    const UnitaryMatrix target_u = readout_unitary(word);
    lib.readouts[word] =
        obtain_pulse("readout_" + word, GrapeTarget(target_u), logical_sys, grape, cfg.pulse_dir, report);
    report.reachable_fidelity =
        GrapeTarget(target_u, reachable).fidelity(pulse_to_unitary(*lib.readouts[word], logical_sys).matrix());
    worst_readout = std::max(worst_readout, std::sqrt(4.0 * std::max(0.0, 1.0 - report.reachable_fidelity)));
    lib.reports.push_back(report);
  }
  lib.expectation_bound = 2.0 * (std::sqrt(4.0 * std::max(0.0, 1.0 - ent_report.fidelity)) + worst_readout);
  return lib;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExperimentKind kind = cfg.experiment;
  const std::vector<double> times = cfg.grid.points();
  const std::vector<ReadoutPlan> plans = experiment_plans(kind);

  ExperimentResult result;
  result.experiment = kind;
  result.level = cfg.level;
  result.observables = observable_words(kind);

  std::vector<PointMeasurement> points;
  points.reserve(times.size());
  std::vector<double> ideal_flat;
  std::vector<double> model_flat;

  if (cfg.level == SimulationLevel::kIdeal || cfg.level == SimulationLevel::kCircuit) {
    for (double t : times) {
      const DensityMatrix rho = cfg.level == SimulationLevel::kIdeal ? ideal_state(kind, cfg.omega, t)
                                                                     : circuit_state(kind, cfg.omega, t);
      points.push_back(measure_ideal_rotations(rho, plans));
    }
  } else {
    const Circuit layout = experiment_circuit(kind, 0.0, cfg.omega, kRegister);
    const SpinSystem sys = logical_register(layout, *cfg.molecule);
    const PulseLibrary lib = synthesize_pulses(kind, sys, cfg);
    result.pulses = lib.reports;
    result.level_bound = lib.expectation_bound;

    if (cfg.level == SimulationLevel::kPulse) {
      const DensityMatrix rho0 = DensityMatrix::from_pure(StateVector::zero(kRegister));
      for (double t : times) points.push_back(measure_pulses(rho0, -2.0 * cfg.omega * t, plans, lib, sys, nullptr, 1.0));
    } else {
      const double eps = cfg.noise.polarization;
      // Model run: exact PPS, pulses with T2; its distance from the ideal
      // values is the model discrepancy of the error budget.
      NoiseModel model_noise = cfg.noise;
      model_noise.pps_infidelity = 0.0;
      const DensityMatrix exact_pps = prepare_pps(eps, kRegister, 0.0);
      const DensityMatrix noisy_pps = prepare_pps(eps, kRegister, cfg.noise.pps_infidelity);
      std::mt19937_64 rng(cfg.seed);
      std::normal_distribution<double> readout_noise(0.0, 1.0);
      for (double t : times) {
        const double theta = -2.0 * cfg.omega * t;
        const PointMeasurement ideal = measure_ideal_rotations(ideal_state(kind, cfg.omega, t), plans);
        const PointMeasurement model = measure_pulses(exact_pps, theta, plans, lib, sys, &model_noise, eps);
        ideal_flat.insert(ideal_flat.end(), ideal.values.begin(), ideal.values.end());
        model_flat.insert(model_flat.end(), model.values.begin(), model.values.end());
        PointMeasurement measured = measure_pulses(noisy_pps, theta, plans, lib, sys, &cfg.noise, eps);
        for (double& v : measured.values) v += cfg.readout_sigma * readout_noise(rng);
        points.push_back(std::move(measured));
      }
      result.budget = make_budget(discrepancy(ideal_flat, model_flat), cfg.noise.pps_infidelity, cfg.combination);
    }
  }

  for (std::size_t i = 0; i < times.size(); ++i) {
    const PointMeasurement& m = points[i];
    if (i == 0) {
      result.observables_per_point = m.touched.size();
      result.runs_per_point = m.runs;
    } else if (m.touched.size() != result.observables_per_point || m.runs != result.runs_per_point) {
      throw std::logic_error("observable count changed between time points");
    }
    TimeSeriesRecord rec;
    rec.t_s = times[i];
    rec.expectations = m.values;
    const double sigma = result.budget ? result.budget->sigma : 0.0;
    rec.sigmas.assign(m.values.size(), sigma);
    rec.monotone = monotone_of(kind, rec.expectations);
    if (sigma > 0.0) {
      rec.monotone_sigma = propagate_sigma([&](std::span<const double> v) { return monotone_of(kind, v); },
                                           rec.expectations, rec.sigmas);
    }
    rec.reference = analytic_reference(kind, cfg.omega, times[i]);
    result.records.push_back(std::move(rec));
  }
  return result;
}

void emit_csv(std::ostream& out, const ExperimentResult& result) {
  if (result.records.empty()) throw std::invalid_argument("emit_csv: no records");
  out << "t_s";
  for (const std::string& o : result.observables) out << ',' << o;
  for (const std::string& o : result.observables) out << ",sigma_" << o;
  out << ",monotone,monotone_sigma,reference\n";
  for (const TimeSeriesRecord& r : result.records) {
    if (r.expectations.size() != result.observables.size() || r.sigmas.size() != result.observables.size()) {
      throw std::invalid_argument("emit_csv: record width does not match the observable list");
    }
    out << format_number(r.t_s);
    for (double v : r.expectations) out << ',' << format_number(v);
    for (double s : r.sigmas) out << ',' << format_number(s);
    out << ',' << format_number(r.monotone) << ',' << format_number(r.monotone_sigma) << ','
        << format_number(r.reference) << '\n';
  }
  if (!out) throw std::runtime_error("emit_csv: write failed");
}

void emit_csv(const std::filesystem::path& path, const ExperimentResult& result) {
  if (result.records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_csv(out, result);
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace eqs
