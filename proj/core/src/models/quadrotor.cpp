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

#include "ohddp/models/quadrotor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ohddp {

QuadrotorModel::QuadrotorModel(const QuadrotorParams& params)
    : Rk4Model(params.dt), params_(params) {
  if (!(params_.mass > 0.0) || !(params_.inertia.minCoeff() > 0.0)) {
    throw std::invalid_argument("QuadrotorModel: mass and inertia must be > 0");
  }
  if (params_.goal.size() != 12 || params_.q.size() != 12 || params_.qf.size() != 12 ||
      params_.r.size() != 4) {
    throw std::invalid_argument("QuadrotorModel: goal/q/qf need 12 entries and r needs 4");
  }
  if (!(params_.r.minCoeff() > 0.0)) {
    throw std::invalid_argument("QuadrotorModel: control weights must be > 0");
  }
}

Vector QuadrotorModel::hover_control() const {
  Vector u = Vector::Zero(4);
  u[0] = params_.mass * params_.gravity;
  return u;
}

bool QuadrotorModel::admissible(const Vector& x) const {
  constexpr double kLimit = std::numbers::pi / 2.0;
  return x.allFinite() && std::abs(x[3]) < kLimit && std::abs(x[4]) < kLimit;
}

Vector QuadrotorModel::derivative(const Vector& x, const Vector& u) const {
  const double m = params_.mass, g = params_.gravity;
  const auto& I = params_.inertia;
  const double sphi = std::sin(x[3]), cphi = std::cos(x[3]);
  const double sth = std::sin(x[4]), cth = std::cos(x[4]), tth = sth / cth;
  const double sps = std::sin(x[5]), cps = std::cos(x[5]);
  const double p = x[9], q = x[10], r = x[11];
  const double thrust = u[0];

  Vector xd(12);
  xd.segment<3>(0) = x.segment<3>(6);
  xd[3] = p + sphi * tth * q + cphi * tth * r;
  xd[4] = cphi * q - sphi * r;
  xd[5] = (sphi * q + cphi * r) / cth;
  xd[6] = thrust / m * (cphi * sth * cps + sphi * sps);
  xd[7] = thrust / m * (cphi * sth * sps - sphi * cps);
  xd[8] = thrust / m * (cphi * cth) - g;
  xd[9] = ((I[1] - I[2]) * q * r + u[1]) / I[0];
  xd[10] = ((I[2] - I[0]) * p * r + u[2]) / I[1];
  xd[11] = ((I[0] - I[1]) * p * q + u[3]) / I[2];
  return xd;
}

std::optional<DynamicsJacobians> QuadrotorModel::derivative_jacobians(const Vector& x,
                                                                      const Vector& u) const {
  const double m = params_.mass;
  const auto& I = params_.inertia;
  const double sphi = std::sin(x[3]), cphi = std::cos(x[3]);
  const double sth = std::sin(x[4]), cth = std::cos(x[4]), tth = sth / cth;
  const double sps = std::sin(x[5]), cps = std::cos(x[5]);
  const double p = x[9], q = x[10], r = x[11];
  const double thrust = u[0];

  DynamicsJacobians J{Matrix::Zero(12, 12), Matrix::Zero(12, 4)};
  J.f_x.block<3, 3>(0, 6).setIdentity();

  // Euler-angle kinematics
  J.f_x(3, 3) = cphi * tth * q - sphi * tth * r;
  J.f_x(3, 4) = (sphi * q + cphi * r) / (cth * cth);
  J.f_x(3, 9) = 1.0;
  J.f_x(3, 10) = sphi * tth;
  J.f_x(3, 11) = cphi * tth;
  J.f_x(4, 3) = -sphi * q - cphi * r;
  J.f_x(4, 10) = cphi;
  J.f_x(4, 11) = -sphi;
  J.f_x(5, 3) = (cphi * q - sphi * r) / cth;
  J.f_x(5, 4) = (sphi * q + cphi * r) * sth / (cth * cth);
  J.f_x(5, 10) = sphi / cth;
  J.f_x(5, 11) = cphi / cth;

  // Thrust direction R e3 and its partials
  const Eigen::Vector3d a(cphi * sth * cps + sphi * sps, cphi * sth * sps - sphi * cps,
                          cphi * cth);
  const Eigen::Vector3d a_phi(-sphi * sth * cps + cphi * sps, -sphi * sth * sps - cphi * cps,
                              -sphi * cth);
  const Eigen::Vector3d a_th(cphi * cth * cps, cphi * cth * sps, -cphi * sth);
  const Eigen::Vector3d a_ps(-cphi * sth * sps + sphi * cps, cphi * sth * cps + sphi * sps, 0.0);
  J.f_x.block<3, 1>(6, 3) = thrust / m * a_phi;
  J.f_x.block<3, 1>(6, 4) = thrust / m * a_th;
  J.f_x.block<3, 1>(6, 5) = thrust / m * a_ps;
  J.f_u.block<3, 1>(6, 0) = a / m;

  // Euler's rotation equations
  J.f_x(9, 10) = (I[1] - I[2]) * r / I[0];
  J.f_x(9, 11) = (I[1] - I[2]) * q / I[0];
  J.f_x(10, 9) = (I[2] - I[0]) * r / I[1];
  J.f_x(10, 11) = (I[2] - I[0]) * p / I[1];
  J.f_x(11, 9) = (I[0] - I[1]) * q / I[2];
  J.f_x(11, 10) = (I[0] - I[1]) * p / I[2];
  J.f_u(9, 1) = 1.0 / I[0];
  J.f_u(10, 2) = 1.0 / I[1];
  J.f_u(11, 3) = 1.0 / I[2];
  return J;
}

double QuadrotorModel::running_cost(const Vector& x, const Vector& u) const {
  const Vector dx = x - params_.goal;
  const Vector du = u - hover_control();
  return 0.5 * (dx.dot(params_.q.cwiseProduct(dx)) + du.dot(params_.r.cwiseProduct(du))) +
         params_.c_t;
}

double QuadrotorModel::terminal_cost(const Vector& x) const {
  const Vector dx = x - params_.goal;
  return 0.5 * dx.dot(params_.qf.cwiseProduct(dx));
}

std::optional<CostExpansion> QuadrotorModel::running_cost_expansion(const Vector& x,
                                                                    const Vector& u) const {
  CostExpansion e;
  e.l = running_cost(x, u);
  e.l_x = params_.q.cwiseProduct(x - params_.goal);
  e.l_u = params_.r.cwiseProduct(u - hover_control());
  e.l_xx = params_.q.asDiagonal();
  e.l_ux = Matrix::Zero(4, 12);
  e.l_uu = params_.r.asDiagonal();
  return e;
}

std::optional<TerminalExpansion> QuadrotorModel::terminal_cost_expansion(const Vector& x) const {
  TerminalExpansion e;
  e.phi = terminal_cost(x);
  e.phi_x = params_.qf.cwiseProduct(x - params_.goal);
  e.phi_xx = params_.qf.asDiagonal();
  return e;
}

}  // namespace ohddp
