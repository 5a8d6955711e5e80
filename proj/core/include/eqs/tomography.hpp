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

// Full-state tomography by linear inversion over all non-identity Pauli
// strings, used as the baseline that the embedded-observable method is
// compared against.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "eqs/qcore.hpp"

namespace eqs {

inline constexpr std::size_t kMaxTomographyQubits = 4;

struct PauliExpectation {
  PauliString observable;
  double value;
};

struct TomographyResult {
  /// (I + sum_P <P> P) / 2^n. Hermitian with unit trace by construction; it
  /// is not projected onto the positive cone.
  CMatrix reconstructed;
  double min_eigenvalue = 0.0;
  /// All 4^n - 1 non-identity words in lexicographic IXYZ order.
  std::vector<PauliExpectation> expectations;

  std::size_t observable_count() const { return expectations.size(); }
};

/// Every non-identity Pauli word on n qubits, lexicographic over I < X < Y < Z.
std::vector<PauliString> tomography_observables(std::size_t num_qubits);

/// Exact expectations from `rho`. `perturb`, when set, is applied to each
/// expectation in order (for example to add measurement noise).
TomographyResult full_state_tomography(const DensityMatrix& rho,
                                       const std::function<double(double)>& perturb = {});

/// Linear inversion from a given expectation list (4^n - 1 entries).
TomographyResult reconstruct(std::size_t num_qubits, std::vector<PauliExpectation> expectations);

struct StateFidelity {
  /// <psi| rho |psi>.
  double raw = 0.0;
  /// Same overlap for the deviation part (rho - (1 - eps) I / 2^n) / eps.
  double normalized = 0.0;
};

/// `epsilon` is the polarization used for the normalized value; pass 1 for
/// pure-state inputs.
StateFidelity state_fidelity(const DensityMatrix& rho, const StateVector& target, double epsilon = 1.0);

/// `word,value` rows after a header line.
void write_expectations(std::ostream& out, const std::vector<PauliExpectation>& expectations);

}  // namespace eqs
