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

#include "eqs/errorbars.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eqs {

double discrepancy(std::span<const double> ideal, std::span<const double> noisy, double full_scale) {
  if (ideal.empty()) throw std::invalid_argument("discrepancy: empty series");
  if (ideal.size() != noisy.size()) throw std::invalid_argument("discrepancy: series lengths differ");
  if (!(full_scale > 0.0)) throw std::invalid_argument("discrepancy: full scale must be positive");
  double sum = 0.0;
  for (std::size_t k = 0; k < ideal.size(); ++k) sum += std::abs(ideal[k] - noisy[k]);
  return sum / static_cast<double>(ideal.size()) / full_scale;
}

double error_bar(double total_bound) {
  if (!(total_bound >= 0.0) || !std::isfinite(total_bound)) {
    throw std::invalid_argument("error_bar: bound must be finite and >= 0");
  }
  return total_bound / kGaussian95;
}

ErrorBudget make_budget(double model_discrepancy, double preparation_infidelity, BoundCombination combination) {
  if (!(model_discrepancy >= 0.0) || !(preparation_infidelity >= 0.0)) {
    throw std::invalid_argument("error budget terms must be >= 0");
  }
  ErrorBudget b;
  b.model_discrepancy = model_discrepancy;
  b.preparation_infidelity = preparation_infidelity;
  b.combination = combination;
  b.total_bound = combination == BoundCombination::kAdditive ? model_discrepancy + preparation_infidelity
                                                             : std::hypot(model_discrepancy, preparation_infidelity);
  b.sigma = error_bar(b.total_bound);
  return b;
}

double propagate_sigma(const std::function<double(std::span<const double>)>& f, std::span<const double> values,
                       std::span<const double> sigmas, double step) {
  if (values.size() != sigmas.size()) throw std::invalid_argument("propagate_sigma: size mismatch");
  if (!(step > 0.0)) throw std::invalid_argument("propagate_sigma: step must be positive");
  std::vector<double> x(values.begin(), values.end());
  const double f0 = f(x);
  double variance = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (sigmas[k] < 0.0) throw std::invalid_argument("propagate_sigma: negative sigma");
    if (sigmas[k] == 0.0) continue;
    x[k] = values[k] + step;
    const double up = (f(x) - f0) / step;
    x[k] = values[k] - step;
    const double down = (f0 - f(x)) / step;
    x[k] = values[k];
    const double slope = std::max(std::abs(up), std::abs(down));
    variance += slope * slope * sigmas[k] * sigmas[k];
  }
  return std::sqrt(variance);
}

}  // namespace eqs
