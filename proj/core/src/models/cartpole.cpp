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

#include "ohddp/models/cartpole.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ohddp {

CartpoleModel::CartpoleModel(const CartpoleParams& params)
    : Rk4Model(params.dt), params_(params) {
  if (!(params_.cart_mass > 0.0 && params_.pole_mass > 0.0 && params_.pole_length > 0.0)) {
    throw std::invalid_argument("CartpoleModel: masses and pole length must be > 0");
  }
  if (!(params_.w_control > 0.0)) {
    throw std::invalid_argument("CartpoleModel: w_control must be > 0");
  }
}

Vector CartpoleModel::derivative(const Vector& x, const Vector& u) const {
  const double M = params_.cart_mass, m = params_.pole_mass, l = params_.pole_length;
  const double g = params_.gravity;
  const double th = x[2], w = x[3], f = u[0];
  const double s = std::sin(th), c = std::cos(th);
  const double D = M + m * s * s;
  Vector xd(4);
  xd[0] = x[1];
  xd[1] = (f + m * s * (l * w * w + g * c)) / D;
  xd[2] = w;
  xd[3] = (-f * c - m * l * w * w * c * s - (M + m) * g * s) / (l * D);
  return xd;
}

std::optional<DynamicsJacobians> CartpoleModel::derivative_jacobians(const Vector& x,
                                                                     const Vector& u) const {
  const double M = params_.cart_mass, m = params_.pole_mass, l = params_.pole_length;
  const double g = params_.gravity;
  const double th = x[2], w = x[3], f = u[0];
  const double s = std::sin(th), c = std::cos(th);
  const double D = M + m * s * s;
  const double D_th = 2.0 * m * s * c;

  const double N1 = f + m * s * (l * w * w + g * c);
  const double N1_th = m * c * (l * w * w + g * c) - m * g * s * s;
  const double N1_w = 2.0 * m * s * l * w;

  const double N2 = -f * c - m * l * w * w * c * s - (M + m) * g * s;
  const double N2_th = f * s - m * l * w * w * (c * c - s * s) - (M + m) * g * c;
  const double N2_w = -2.0 * m * l * w * c * s;

  DynamicsJacobians J{Matrix::Zero(4, 4), Matrix::Zero(4, 1)};
  J.f_x(0, 1) = 1.0;
  J.f_x(1, 2) = (N1_th * D - N1 * D_th) / (D * D);
  J.f_x(1, 3) = N1_w / D;
  J.f_x(2, 3) = 1.0;
  J.f_x(3, 2) = (N2_th * D - N2 * D_th) / (l * D * D);
  J.f_x(3, 3) = N2_w / (l * D);
  J.f_u(1, 0) = 1.0 / D;
  J.f_u(3, 0) = -c / (l * D);
  return J;
}

double CartpoleModel::running_cost(const Vector& x, const Vector& u) const {
  return params_.dt *
         (0.5 * (params_.w_cart_velocity * x[1] * x[1] + params_.w_pole_velocity * x[3] * x[3] +
                 params_.w_control * u[0] * u[0]) +
          params_.c_t);
}

double CartpoleModel::terminal_cost(const Vector& x) const {
  const double dth = x[2] - std::numbers::pi;
  return 0.5 * (params_.w_terminal_angle * dth * dth +
                params_.w_terminal_velocity * (x[1] * x[1] + x[3] * x[3]));
}

std::optional<CostExpansion> CartpoleModel::running_cost_expansion(const Vector& x,
                                                                   const Vector& u) const {
  CostExpansion e;
  e.l = running_cost(x, u);
  e.l_xx = Matrix::Zero(4, 4);
  e.l_xx(1, 1) = params_.dt * params_.w_cart_velocity;
  e.l_xx(3, 3) = params_.dt * params_.w_pole_velocity;
  e.l_x = e.l_xx * x;
  e.l_uu = Matrix::Constant(1, 1, params_.dt * params_.w_control);
  e.l_u = e.l_uu * u;
  e.l_ux = Matrix::Zero(1, 4);
  return e;
}

std::optional<TerminalExpansion> CartpoleModel::terminal_cost_expansion(const Vector& x) const {
  TerminalExpansion e;
  e.phi = terminal_cost(x);
  e.phi_xx = Matrix::Zero(4, 4);
  e.phi_xx(1, 1) = params_.w_terminal_velocity;
  e.phi_xx(2, 2) = params_.w_terminal_angle;
  e.phi_xx(3, 3) = params_.w_terminal_velocity;
  Vector dx = x;
  dx[2] -= std::numbers::pi;
  e.phi_x = e.phi_xx * dx;
  return e;
}

}  // namespace ohddp
