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

#include "ohddp/models/rk4.hpp"

namespace ohddp {

struct QuadrotorParams {
  double mass = 0.468;  // kg
  Eigen::Vector3d inertia{4.856e-3, 4.856e-3, 8.801e-3};  // kg m^2, body principal axes
  double gravity = 9.81;
  double dt = 0.05;

  Vector goal = Vector::Zero(12);
  Vector q = Vector::Zero(12);   // running state weights (diagonal)
  Vector r = (Vector(4) << 1.0, 100.0, 100.0, 100.0).finished();  // on u - hover
  Vector qf = (Vector(12) << 1000.0, 1000.0, 1000.0, 100.0, 100.0, 100.0, 100.0, 100.0, 100.0,
               100.0, 100.0, 100.0).finished();  // terminal, diagonal
  double c_t = 0.0;
};

/// Rigid-body quadrotor with Z-Y-X Euler angles.
///
/// State: position (3), roll/pitch/yaw (3), world-frame velocity (3), body
/// rates (3). Control: total thrust along body z and three body torques.
/// Admissible attitudes satisfy |roll|, |pitch| < pi/2.
class QuadrotorModel final : public Rk4Model {
 public:
  explicit QuadrotorModel(const QuadrotorParams& params = {});

  const QuadrotorParams& params() const { return params_; }
  Vector hover_control() const;

  std::string name() const override { return "quadrotor"; }
  int state_dim() const override { return 12; }
  int control_dim() const override { return 4; }
  Vector nominal_control() const override { return hover_control(); }
  bool admissible(const Vector& x) const override;

  Vector derivative(const Vector& x, const Vector& u) const override;
  std::optional<DynamicsJacobians> derivative_jacobians(const Vector& x,
                                                        const Vector& u) const override;

  double running_cost(const Vector& x, const Vector& u) const override;
  double terminal_cost(const Vector& x) const override;
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override;
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override;

 private:
  QuadrotorParams params_;
};

}  // namespace ohddp
