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

// Error bars from a model discrepancy plus a preparation infidelity, turned
// into a Gaussian sigma whose two-sided 95% interval equals the total bound.
//
// Discrepancies are fractions of full scale. Pauli expectations live in
// [-1, 1], so the full scale is 2 and a discrepancy of 0.5 means the noisy
// values sit on average half the range away from the ideal ones.

#include <functional>
#include <span>
#include <vector>

namespace eqs {

inline constexpr double kGaussian95 = 1.959964;

enum class BoundCombination { kAdditive, kQuadrature };

/// mean |ideal_i - noisy_i| / full_scale. Throws on empty or unequal inputs.
double discrepancy(std::span<const double> ideal, std::span<const double> noisy, double full_scale = 2.0);

/// bound / 1.959964; throws std::invalid_argument for a negative bound.
double error_bar(double total_bound);

struct ErrorBudget {
  double model_discrepancy = 0.0;
  double preparation_infidelity = 0.0;
  BoundCombination combination = BoundCombination::kAdditive;
  double total_bound = 0.0;
  double sigma = 0.0;
};

ErrorBudget make_budget(double model_discrepancy, double preparation_infidelity,
                        BoundCombination combination = BoundCombination::kAdditive);

/// First-order propagation of independent errors through f. Each partial
/// derivative is the larger of the one-sided difference quotients, so kinks
/// such as |z| at z = 0 are not reported as flat.
double propagate_sigma(const std::function<double(std::span<const double>)>& f, std::span<const double> values,
                       std::span<const double> sigmas, double step = 1e-6);

}  // namespace eqs
