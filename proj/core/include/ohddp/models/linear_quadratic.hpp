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

#include "ohddp/lti.hpp"
#include "ohddp/model.hpp"

namespace ohddp {

/// SystemModel backed by an LtiProblem: f(x, u) = A x + B u,
/// l = 1/2 (x'Qx + u'Ru) + c_t, Phi = 1/2 x'Qf x. All derivatives are exact.
class LinearQuadraticModel : public SystemModel {
 public:
  explicit LinearQuadraticModel(LtiProblem problem, double dt = 1.0);

  const LtiProblem& problem() const { return problem_; }

  std::string name() const override { return "linear"; }
  int state_dim() const override { return problem_.state_dim(); }
  int control_dim() const override { return problem_.control_dim(); }
  double timestep() const override { return dt_; }

  Vector step(const Vector& x, const Vector& u) const override;
  double running_cost(const Vector& x, const Vector& u) const override;
  double terminal_cost(const Vector& x) const override;
  std::optional<DynamicsJacobians> step_jacobians(const Vector& x,
                                                  const Vector& u) const override;
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override;
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override;
  std::optional<Vector> inverse_step(const Vector& x_next, const Vector& u) const override;
  bool invertible() const override { return a_inverse_.has_value(); }

 private:
  LtiProblem problem_;
  double dt_;
  std::optional<Matrix> a_inverse_;
};

struct DoubleIntegratorParams {
  double dt = 0.1;
  double q = 1.0;    // running state weight (Q = q I)
  double r = 1.0;    // control weight
  double qf = 1.0;   // terminal weight (Qf = qf I)
  double c_t = 0.0;  // cost per step
  int t_min = 1;
  int t_max = 100;
};

/// Planar double integrator: position/velocity state, acceleration control.
class DoubleIntegratorModel final : public LinearQuadraticModel {
 public:
  explicit DoubleIntegratorModel(const DoubleIntegratorParams& params = {});

  const DoubleIntegratorParams& params() const { return params_; }
  std::string name() const override { return "double_integrator"; }

  static LtiProblem make_problem(const DoubleIntegratorParams& params);

 private:
  DoubleIntegratorParams params_;
};

}  // namespace ohddp
