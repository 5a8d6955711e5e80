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

#include "eqs/tomography.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace eqs {

std::vector<PauliString> tomography_observables(std::size_t num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxTomographyQubits) {
    throw std::invalid_argument("tomography supports 1 to 4 qubits");
  }
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  const std::size_t count = std::size_t{1} << (2 * num_qubits);
  std::vector<PauliString> words;
  words.reserve(count - 1);
  for (std::size_t code = 1; code < count; ++code) {
    std::string word(num_qubits, 'I');
    for (std::size_t q = 0; q < num_qubits; ++q) word[q] = kLetters[(code >> (2 * (num_qubits - 1 - q))) & 3U];
    words.emplace_back(std::move(word));
  }
  return words;
}

TomographyResult reconstruct(std::size_t num_qubits, std::vector<PauliExpectation> expectations) {
  const std::size_t expected = (std::size_t{1} << (2 * num_qubits)) - 1;
  if (num_qubits < 1 || num_qubits > kMaxTomographyQubits) {
    throw std::invalid_argument("tomography supports 1 to 4 qubits");
  }
  if (expectations.size() != expected) throw std::invalid_argument("reconstruct: need 4^n - 1 expectations");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  CMatrix rho = CMatrix::Identity(d, d);
  for (const PauliExpectation& e : expectations) {
    if (e.observable.num_qubits() != num_qubits) throw std::invalid_argument("reconstruct: word length mismatch");
    rho += e.value * pauli_matrix(e.observable).matrix();
  }
  rho /= static_cast<double>(d);
  TomographyResult result;
  result.reconstructed = 0.5 * (rho + rho.adjoint());
  result.min_eigenvalue = Eigen::SelfAdjointEigenSolver<CMatrix>(result.reconstructed, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
  result.expectations = std::move(expectations);
  return result;
}

TomographyResult full_state_tomography(const DensityMatrix& rho, const std::function<double(double)>& perturb) {
  const std::size_t n = rho.num_qubits();
  std::vector<PauliExpectation> values;
  for (PauliString& p : tomography_observables(n)) {
    double v = expectation(rho, pauli_matrix(p));
    if (perturb) v = perturb(v);
    values.push_back({std::move(p), v});
  }
  return reconstruct(n, std::move(values));
}

StateFidelity state_fidelity(const DensityMatrix& rho, const StateVector& target, double epsilon) {
  if (rho.num_qubits() != target.num_qubits()) throw std::invalid_argument("state_fidelity: dimension mismatch");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("state_fidelity: epsilon must be in (0, 1]");
  const CVector& psi = target.amplitudes();
  const double raw = psi.dot(rho.matrix() * psi).real();
  const double d = static_cast<double>(rho.dimension());
  // <psi| I |psi> = 1, so the identity background shifts the overlap by (1 - eps) / d.
  return {raw, (raw - (1.0 - epsilon) / d) / epsilon};
}

void write_expectations(std::ostream& out, const std::vector<PauliExpectation>& expectations) {
  out << "word,value\n";
  char buffer[40];
  for (const PauliExpectation& e : expectations) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", e.value);
    out << e.observable.word() << ',' << buffer << '\n';
  }
}

}  // namespace eqs
