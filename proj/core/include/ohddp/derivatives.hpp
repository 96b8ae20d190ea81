// Copyright 2026 The ohddp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ohddp/model.hpp"

namespace ohddp {

enum class DerivativeSource {
  kAuto,     // analytic when the model provides it, finite differences otherwise
  kNumeric,  // always finite differences
};

/// Central-difference step for first derivatives.
inline double first_difference_step(double coord) {
  return std::max(1e-6, 1e-6 * std::abs(coord));
}
/// Central-difference step for second derivatives.
inline double second_difference_step(double coord) {
  return std::max(1e-4, 1e-4 * std::abs(coord));
}

/// Raised when a cost or the dynamics turn non-finite at a perturbed point.
class DerivativeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CostExpansion expand_cost(const SystemModel& model, const Vector& x, const Vector& u,
                          DerivativeSource source = DerivativeSource::kAuto);

TerminalExpansion expand_terminal(const SystemModel& model, const Vector& x,
                                  DerivativeSource source = DerivativeSource::kAuto);

/// Jacobians always; second-order tensors only when `second_order` is set.
DynamicsExpansion expand_dynamics(const SystemModel& model, const Vector& x, const Vector& u,
                                  bool second_order,
                                  DerivativeSource source = DerivativeSource::kAuto);

struct DerivativeDiscrepancy {
  std::string quantity;  // "f_x", "l_uu", "phi_x", ...
  double max_relative = 0.0;
  bool analytic = false;  // false when the model has no analytic version to compare
};

struct DerivativeReport {
  double tolerance = 1e-4;
  std::vector<DerivativeDiscrepancy> entries;
  bool passed = true;

  /// Quantities whose discrepancy exceeded the tolerance.
  std::vector<std::string> failures() const;
};

/// Compares analytic against finite-difference derivatives at each sample.
/// The discrepancy of a quantity is max_ij |a_ij - n_ij| / max(1, max_ij |a_ij|),
/// maximized over samples.
DerivativeReport check_derivatives(const SystemModel& model,
                                   const std::vector<std::pair<Vector, Vector>>& samples,
                                   double tolerance = 1e-4);

}  // namespace ohddp
