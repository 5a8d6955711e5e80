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

// Numerical tolerances shared by every module. Validation checks and tests
// read from here so that a threshold is changed in exactly one place.
namespace eqs::tol {

// Unit norm of a StateVector.
inline constexpr double kNorm = 1e-12;
// Max-entry deviation M - M^dagger, relative to max(1, max |M_ij|).
inline constexpr double kHermitian = 1e-12;
// Trace of a DensityMatrix.
inline constexpr double kTrace = 1e-12;
// Smallest eigenvalue allowed in a DensityMatrix.
inline constexpr double kPositive = 1e-10;
// Max-entry deviation of U^dagger U from the identity.
inline constexpr double kUnitary = 1e-10;
// Imaginary residue discarded by expectation values.
inline constexpr double kImagResidue = 1e-10;
// Hermiticity check inside split_hamiltonian (relative, as kHermitian).
inline constexpr double kSplitHermitian = 1e-10;
// Allowed norm drift of a decoded embedded state.
inline constexpr double kDecodeNorm = 1e-9;
// Monotone values may exceed [0, 1] by this much before clamping is an error.
inline constexpr double kMonotoneRange = 1e-10;
// Readout sign matching: R^dagger M R = +-T up to this max-entry error.
inline constexpr double kReadoutSign = 1e-10;

}  // namespace eqs::tol
