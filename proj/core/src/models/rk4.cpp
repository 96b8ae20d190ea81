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

#include "ohddp/models/rk4.hpp"

#include <stdexcept>

namespace ohddp {

Rk4Model::Rk4Model(double dt) : dt_(dt) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("Rk4Model: dt must be > 0");
}

Vector Rk4Model::step_with(const Vector& x, const Vector& u, double h) const {
  require_finite("Rk4Model::step", x, u);
  const Vector k1 = derivative(x, u);
  const Vector k2 = derivative(x + 0.5 * h * k1, u);
  const Vector k3 = derivative(x + 0.5 * h * k2, u);
  const Vector k4 = derivative(x + h * k3, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector Rk4Model::step(const Vector& x, const Vector& u) const { return step_with(x, u, dt_); }

std::optional<DynamicsJacobians> Rk4Model::step_jacobians(const Vector& x,
                                                          const Vector& u) const {
  const double h = dt_;
  const auto n = x.size();
  const Matrix I = Matrix::Identity(n, n);

  // Each stage k_i = F(y_i, u) with y_i depending on (x, u) through the
  // previous stage; carry dk_i/dx and dk_i/du along.
  auto J1 = derivative_jacobians(x, u);
  if (!J1) return std::nullopt;
  const Vector k1 = derivative(x, u);
  const Matrix k1x = J1->f_x;
  const Matrix k1u = J1->f_u;

  const Vector y2 = x + 0.5 * h * k1;
  const auto J2 = *derivative_jacobians(y2, u);
  const Vector k2 = derivative(y2, u);
  const Matrix k2x = J2.f_x * (I + 0.5 * h * k1x);
  const Matrix k2u = J2.f_x * (0.5 * h * k1u) + J2.f_u;

  const Vector y3 = x + 0.5 * h * k2;
  const auto J3 = *derivative_jacobians(y3, u);
  const Vector k3 = derivative(y3, u);
  const Matrix k3x = J3.f_x * (I + 0.5 * h * k2x);
  const Matrix k3u = J3.f_x * (0.5 * h * k2u) + J3.f_u;

  const Vector y4 = x + h * k3;
  const auto J4 = *derivative_jacobians(y4, u);
  const Matrix k4x = J4.f_x * (I + h * k3x);
  const Matrix k4u = J4.f_x * (h * k3u) + J4.f_u;

  DynamicsJacobians out;
  out.f_x = I + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.f_u = (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  return out;
}

}  // namespace ohddp
