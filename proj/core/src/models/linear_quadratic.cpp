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

#include "ohddp/models/linear_quadratic.hpp"

namespace ohddp {

LinearQuadraticModel::LinearQuadraticModel(LtiProblem problem, double dt)
    : problem_(std::move(problem)), dt_(dt) {
  problem_.validate();
  Eigen::FullPivLU<Matrix> lu(problem_.A);
  if (lu.isInvertible()) a_inverse_ = lu.inverse();
}

Vector LinearQuadraticModel::step(const Vector& x, const Vector& u) const {
  require_finite("LinearQuadraticModel::step", x, u);
  return problem_.A * x + problem_.B * u;
}

double LinearQuadraticModel::running_cost(const Vector& x, const Vector& u) const {
  return 0.5 * (x.dot(problem_.Q * x) + u.dot(problem_.R * u)) + problem_.c_t;
}

double LinearQuadraticModel::terminal_cost(const Vector& x) const {
  return 0.5 * x.dot(problem_.Qf * x);
}

std::optional<DynamicsJacobians> LinearQuadraticModel::step_jacobians(const Vector&,
                                                                      const Vector&) const {
  return DynamicsJacobians{problem_.A, problem_.B};
}

std::optional<CostExpansion> LinearQuadraticModel::running_cost_expansion(
    const Vector& x, const Vector& u) const {
  CostExpansion e;
  e.l = running_cost(x, u);
  e.l_x = problem_.Q * x;
  e.l_u = problem_.R * u;
  e.l_xx = problem_.Q;
  e.l_ux = Matrix::Zero(control_dim(), state_dim());
  e.l_uu = problem_.R;
  return e;
}

std::optional<TerminalExpansion> LinearQuadraticModel::terminal_cost_expansion(
    const Vector& x) const {
  return TerminalExpansion{terminal_cost(x), problem_.Qf * x, problem_.Qf};
}

std::optional<Vector> LinearQuadraticModel::inverse_step(const Vector& x_next,
                                                         const Vector& u) const {
  if (!a_inverse_) return std::nullopt;
  return Vector(*a_inverse_ * (x_next - problem_.B * u));
}

LtiProblem DoubleIntegratorModel::make_problem(const DoubleIntegratorParams& p) {
  if (!(p.dt > 0.0)) throw std::invalid_argument("DoubleIntegratorModel: dt must be > 0");
  LtiProblem lti;
  lti.A = Matrix::Identity(2, 2);
  lti.A(0, 1) = p.dt;
  lti.B = Matrix::Zero(2, 1);
  lti.B(1, 0) = p.dt;
  lti.Q = p.q * Matrix::Identity(2, 2);
  lti.R = p.r * Matrix::Identity(1, 1);
  lti.Qf = p.qf * Matrix::Identity(2, 2);
  lti.t_min = p.t_min;
  lti.t_max = p.t_max;
  lti.c_t = p.c_t;
  return lti;
}

DoubleIntegratorModel::DoubleIntegratorModel(const DoubleIntegratorParams& params)
    : LinearQuadraticModel(make_problem(params), params.dt), params_(params) {}

}  // namespace ohddp
