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

struct CartpoleParams {
  double cart_mass = 1.0;    // kg
  double pole_mass = 0.1;    // kg
  double pole_length = 0.5;  // m, pivot to point mass
  double gravity = 9.81;     // m/s^2
  double dt = 0.02;          // s

  // Running terms are rates: l = dt * (1/2 (w_v xdot^2 + w_w thetadot^2 + w_u u^2) + c_t).
  double w_cart_velocity = 0.5;
  double w_pole_velocity = 0.5;
  double w_control = 0.005;
  double w_terminal_angle = 1e5;     // on (theta - pi)^2
  double w_terminal_velocity = 1e4;  // on xdot^2 and thetadot^2
  double c_t = 0.0;                  // cost per second of horizon
};

/// Cart with a point-mass pendulum. State (x, xdot, theta, thetadot) with
/// theta = 0 hanging down and theta = pi upright; control is the cart force.
class CartpoleModel final : public Rk4Model {
 public:
  explicit CartpoleModel(const CartpoleParams& params = {});

  const CartpoleParams& params() const { return params_; }

  std::string name() const override { return "cartpole"; }
  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }

  Vector derivative(const Vector& x, const Vector& u) const override;
  std::optional<DynamicsJacobians> derivative_jacobians(const Vector& x,
                                                        const Vector& u) const override;

  double running_cost(const Vector& x, const Vector& u) const override;
  double terminal_cost(const Vector& x) const override;
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override;
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override;

 private:
  CartpoleParams params_;
};

}  // namespace ohddp
