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

#include <optional>

#include "ohddp/model.hpp"

namespace ohddp {

/// Continuous-time dynamics xdot = F(x, u) discretized by one classical
/// fourth-order Runge-Kutta step of length dt. When the subclass supplies
/// continuous Jacobians, the discrete Jacobians are propagated exactly
/// through the four stages.
class Rk4Model : public SystemModel {
 public:
  explicit Rk4Model(double dt);

  double timestep() const override { return dt_; }
  Vector step(const Vector& x, const Vector& u) const final;
  std::optional<DynamicsJacobians> step_jacobians(const Vector& x,
                                                  const Vector& u) const final;
  bool invertible() const override { return true; }

  virtual Vector derivative(const Vector& x, const Vector& u) const = 0;
  virtual std::optional<DynamicsJacobians> derivative_jacobians(const Vector& /*x*/,
                                                                const Vector& /*u*/) const {
    return std::nullopt;
  }

  /// One step with an explicit step length (used for convergence-order tests).
  Vector step_with(const Vector& x, const Vector& u, double h) const;

 private:
  double dt_;
};

}  // namespace ohddp
