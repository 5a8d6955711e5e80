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

#include <benchmark/benchmark.h>

#include <numbers>

#include "eqs/circuits.hpp"
#include "eqs/embedding.hpp"
#include "eqs/experiment.hpp"
#include "eqs/grape.hpp"
#include "eqs/nmr.hpp"

namespace {

using namespace eqs;

constexpr double kOmega = 2 * std::numbers::pi * 25.0;

void BM_EmbeddedEvolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const HermitianOperator h(kOmega * pauli_matrix(PauliString(std::string(n, 'X'))).matrix());
  const HermitianOperator big = embed_hamiltonian(split_hamiltonian(h));
  const StateVector zero = StateVector::zero(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(zero, big, 5.2e-3));
}
BENCHMARK(BM_EmbeddedEvolution)->Arg(2)->Arg(3);

void BM_CircuitToUnitary(benchmark::State& state) {
  const Circuit c = to_native_gates(build_eqs_circuit(EqsModel::kThreeQubit, 5.2e-3, kOmega));
  for (auto _ : state) benchmark::DoNotOptimize(circuit_to_unitary(c));
}
BENCHMARK(BM_CircuitToUnitary);

void BM_GrapeGradient(benchmark::State& state) {
  const SpinSystem sys = synthetic_crotonic_acid();
  ControlPulse p = ControlPulse::zeros(ControlMode::kGlobal, state.range(0), 50e-6, 4);
  for (Eigen::Index k = 0; k < p.segments(); ++k) p.amplitudes(k, 0) = 1e4 * std::sin(0.3 * static_cast<double>(k));
  const GrapeTarget target(readout_unitary("YXXI"));
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_and_gradient(p, sys, target));
}
BENCHMARK(BM_GrapeGradient)->Arg(20)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_SimulateCompiledCircuit(benchmark::State& state) {
  const SpinSystem mol = synthetic_crotonic_acid();
  const Circuit c = simplify_for_zero_input(build_eqs_circuit(EqsModel::kThreeQubit, 5.2e-3, kOmega));
  const SpinSystem sys = logical_register(c, mol);
  const PulseSequence seq = compile_circuit(c, sys);
  const DensityMatrix rho = prepare_pps(1e-5);
  NoiseModel noise;
  noise.t2_dephasing = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sequence(rho, seq, sys, &noise));
}
BENCHMARK(BM_SimulateCompiledCircuit)->Arg(0)->Arg(1);

void BM_IdealExperiment(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.experiment = state.range(0) ? ExperimentKind::kThreeTangle : ExperimentKind::kConcurrence;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
}
BENCHMARK(BM_IdealExperiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
