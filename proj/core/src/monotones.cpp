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

#include "eqs/monotones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "eqs/tolerances.hpp"

namespace eqs {

namespace {

// O_1, O_2, O_3 of the three-tangle.
const std::array<PauliString, 3>& tangle_linear_parts() {
  static const std::array<PauliString, 3> parts{PauliString("IYY"), PauliString("XYY"),
                                                PauliString("ZYY")};
  return parts;
}

void require_qubits(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    std::ostringstream msg;
    msg << what << ": expected " << expected << " qubits, got " << actual;
    throw std::invalid_argument(msg.str());
  }
}

// Magnitudes of exact pure-state quantities: residue outside [0, 1] beyond
// tolerance means a bug upstream.
double clamp_monotone(double value, const char* what) {
  if (value < -tol::kMonotoneRange || value > 1.0 + tol::kMonotoneRange) {
    std::ostringstream msg;
    msg << what << ": value " << value << " outside [0, 1]";
    throw std::logic_error(msg.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

Complex tangle_combination(Complex o1, Complex o2, Complex o3) {
  return -o1 * o1 + o2 * o2 + o3 * o3;
}

}  // namespace

std::array<PauliString, 2> concurrence_observables() {
  const auto pair = eqs_observables(PauliString("YY"));
  return {pair.z_part, pair.x_part};
}

std::array<PauliString, 6> three_tangle_observables() {
  const auto& o = tangle_linear_parts();
  const auto p1 = eqs_observables(o[0]);
  const auto p2 = eqs_observables(o[1]);
  const auto p3 = eqs_observables(o[2]);
  return {p1.z_part, p1.x_part, p2.z_part, p2.x_part, p3.z_part, p3.x_part};
}

MonotoneResult concurrence_direct(const StateVector& phi) {
  require_qubits(phi.num_qubits(), 2, "concurrence_direct");
  const Complex c = antilinear_expectation_direct(phi, AntilinearOperator(PauliString("YY")));
  return {clamp_monotone(std::abs(c), "concurrence_direct"), {}, MonotoneMethod::kDirect};
}

MonotoneResult concurrence_eqs(const EmbeddedState& big) {
  require_qubits(big.state().num_qubits(), 3, "concurrence_eqs");
  MonotoneResult result;
  result.method = MonotoneMethod::kEqs;
  for (const auto& word : concurrence_observables()) {
    result.constituents.push_back({word, expectation(big.state(), pauli_matrix(word))});
  }
  result.value = clamp_monotone(
      concurrence_from_expectations(result.constituents[0].value, result.constituents[1].value),
      "concurrence_eqs");
  return result;
}

MonotoneResult three_tangle_direct(const StateVector& phi) {
  require_qubits(phi.num_qubits(), 3, "three_tangle_direct");
  std::array<Complex, 3> o{};
  for (std::size_t k = 0; k < 3; ++k) {
    o[k] = antilinear_expectation_direct(phi, AntilinearOperator(tangle_linear_parts()[k]));
  }
  const double value = std::abs(tangle_combination(o[0], o[1], o[2]));
  return {clamp_monotone(value, "three_tangle_direct"), {}, MonotoneMethod::kDirect};
}

MonotoneResult three_tangle_eqs(const EmbeddedState& big) {
  require_qubits(big.state().num_qubits(), 4, "three_tangle_eqs");
  MonotoneResult result;
  result.method = MonotoneMethod::kEqs;
  std::array<double, 6> values{};
  const auto words = three_tangle_observables();
  for (std::size_t k = 0; k < words.size(); ++k) {
    values[k] = expectation(big.state(), pauli_matrix(words[k]));
    result.constituents.push_back({words[k], values[k]});
  }
  result.value = clamp_monotone(three_tangle_from_expectations(values), "three_tangle_eqs");
  return result;
}

double concurrence_from_expectations(double zyy, double xyy) {
  return std::abs(antilinear_from_expectations(zyy, xyy));
}

double three_tangle_from_expectations(std::span<const double, 6> values) {
  const Complex o1 = antilinear_from_expectations(values[0], values[1]);
  const Complex o2 = antilinear_from_expectations(values[2], values[3]);
  const Complex o3 = antilinear_from_expectations(values[4], values[5]);
  return std::abs(tangle_combination(o1, o2, o3));
}

}  // namespace eqs
