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

// Weakly coupled homonuclear spin register and its rotating-frame
// Hamiltonian
//   H_int = sum_j pi (nu_j - nu_0) sigma_z^j + sum_{j<k} (pi/2) J_jk sigma_z^j sigma_z^k
// in rad/s.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqs/qcore.hpp"

namespace eqs {

struct SpinSystem {
  std::vector<std::string> labels;
  std::vector<double> shifts_hz;
  double reference_hz = 0.0;
  RMatrix j_hz;  // symmetric, zero diagonal
  std::vector<double> t2_s;
  std::string note;

  std::size_t size() const { return labels.size(); }
  double offset_hz(std::size_t spin) const { return shifts_hz.at(spin) - reference_hz; }
  double coupling_hz(std::size_t a, std::size_t b) const;
  std::size_t index_of(std::string_view label) const;

  /// Throws std::invalid_argument on inconsistent sizes, an asymmetric J
  /// matrix, non-finite values or T2 <= 0.
  void validate() const;

  /// The listed spins, in the order given. Used both to restrict to a
  /// subsystem and to reorder physical spins into logical order.
  SpinSystem subsystem(std::span<const std::size_t> spins) const;
};

/// JSON object with fields `spins`, `shifts_hz`, `reference_hz`,
/// `j_couplings_hz` (upper triangle, row k holding J_{k,k+1..n}) and `t2_s`;
/// `note` is optional.
SpinSystem parse_spin_system(std::string_view json_text);
SpinSystem load_spin_system(const std::filesystem::path& path);
std::string to_json(const SpinSystem& sys);

/// Built-in copy of molecules/synthetic_crotonic_acid.json. The values are
/// illustrative, not measured parameters of any sample.
SpinSystem synthetic_crotonic_acid();

/// Diagonal 2^n x 2^n operator, rad/s.
HermitianOperator internal_hamiltonian(const SpinSystem& sys);

/// Diagonal of internal_hamiltonian(sys).
Eigen::VectorXd internal_energies(const SpinSystem& sys);

}  // namespace eqs
