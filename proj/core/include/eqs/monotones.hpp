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

// Concurrence and three-tangle, each available from the wavefunction
// directly and from the reduced set of embedded-space observables.
//
//   C   = |<phi| YY |phi*>|
//   E_3 = |-<IYY K>^2 + <XYY K>^2 + <ZYY K>^2|

#include <array>
#include <span>
#include <vector>

#include "eqs/embedding.hpp"
#include "eqs/qcore.hpp"

namespace eqs {

enum class MonotoneMethod { kDirect, kEqs };

struct Constituent {
  PauliString observable;
  double value;
};

struct MonotoneResult {
  double value = 0.0;
  /// Embedded-space expectations the value was assembled from; empty for
  /// the direct method.
  std::vector<Constituent> constituents;
  MonotoneMethod method = MonotoneMethod::kDirect;
};

/// ZYY, XYY.
std::array<PauliString, 2> concurrence_observables();
/// ZIYY, XIYY, ZXYY, XXYY, ZZYY, XZYY.
std::array<PauliString, 6> three_tangle_observables();

MonotoneResult concurrence_direct(const StateVector& phi);
MonotoneResult concurrence_eqs(const EmbeddedState& big);

MonotoneResult three_tangle_direct(const StateVector& phi);
MonotoneResult three_tangle_eqs(const EmbeddedState& big);

/// Concurrence from measured <ZYY>, <XYY>. Values are not range checked,
/// since noisy inputs may legitimately exceed 1.
double concurrence_from_expectations(double zyy, double xyy);

/// Three-tangle from the six expectations, ordered as three_tangle_observables().
double three_tangle_from_expectations(std::span<const double, 6> values);

}  // namespace eqs
