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

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ohddp/types.hpp"

namespace ohddp {

/// Quadratic expansion of the running cost around a nominal (x, u).
struct CostExpansion {
  double l = 0.0;
  Vector l_x;
  Vector l_u;
  Matrix l_xx;
  Matrix l_ux;  // m x n
  Matrix l_uu;
};

/// Quadratic expansion of the terminal cost around a nominal x.
struct TerminalExpansion {
  double phi = 0.0;
  Vector phi_x;
  Matrix phi_xx;
};

struct DynamicsJacobians {
  Matrix f_x;  // n x n
  Matrix f_u;  // n x m
};

/// Linearization of the discrete map around (x, u). The second-order
/// tensors are stored per output component: f_xx[i] is the Hessian of f_i
/// with respect to x, f_ux[i] is m x n and f_uu[i] is m x m. They are empty
/// unless explicitly requested.
struct DynamicsExpansion {
  Vector f0;
  Matrix f_x;
  Matrix f_u;
  std::vector<Matrix> f_xx;
  std::vector<Matrix> f_ux;
  std::vector<Matrix> f_uu;

  bool has_second_order() const { return !f_xx.empty(); }
};

/// Raised by SystemModel::step when the state or control is not finite.
class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws NonFiniteInput naming `model` unless x and u are finite.
void require_finite(const char* model, const Vector& x, const Vector& u);

/// Discrete-time system x_{t+1} = f(x_t, u_t) with stationary running cost
/// l(x, u) and terminal cost Phi(x).
///
/// Analytic derivatives are optional; anything left as std::nullopt is
/// computed by central finite differences (see derivatives.hpp).
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  /// Seconds per discrete step, used only for reporting.
  virtual double timestep() const { return 1.0; }

  virtual Vector step(const Vector& x, const Vector& u) const = 0;
  virtual double running_cost(const Vector& x, const Vector& u) const = 0;
  virtual double terminal_cost(const Vector& x) const = 0;

  virtual std::optional<DynamicsJacobians> step_jacobians(const Vector& /*x*/,
                                                          const Vector& /*u*/) const {
    return std::nullopt;
  }
  virtual std::optional<CostExpansion> running_cost_expansion(const Vector& /*x*/,
                                                              const Vector& /*u*/) const {
    return std::nullopt;
  }
  virtual std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& /*x*/) const {
    return std::nullopt;
  }

  /// Closed-form x solving f(x, u) = x_next, when one exists.
  virtual std::optional<Vector> inverse_step(const Vector& /*x_next*/,
                                             const Vector& /*u*/) const {
    return std::nullopt;
  }
  /// True when f(., u) is locally invertible so that a Newton solve for the
  /// previous state is meaningful even without a closed form.
  virtual bool invertible() const { return false; }

  /// Control used for cold starts (zero unless overridden, e.g. hover thrust).
  virtual Vector nominal_control() const { return Vector::Zero(control_dim()); }

  /// Nominal control if (x, nominal_control()) is a fixed point of f.
  std::optional<Vector> rest_control(const Vector& x, double tol = 1e-8) const;

  /// States the model can be evaluated at, e.g. away from Euler singularities.
  virtual bool admissible(const Vector& /*x*/) const { return true; }
};

using ModelPtr = std::shared_ptr<const SystemModel>;

/// Adds a constant c_t to the running cost of `base`. The dynamics and the
/// terminal cost are forwarded unchanged.
class TimePenalizedModel final : public SystemModel {
 public:
  TimePenalizedModel(ModelPtr base, double c_t);

  const SystemModel& base() const { return *base_; }
  double time_penalty() const { return c_t_; }

  std::string name() const override;
  int state_dim() const override { return base_->state_dim(); }
  int control_dim() const override { return base_->control_dim(); }
  double timestep() const override { return base_->timestep(); }
  Vector step(const Vector& x, const Vector& u) const override { return base_->step(x, u); }
  double running_cost(const Vector& x, const Vector& u) const override {
    return base_->running_cost(x, u) + c_t_;
  }
  double terminal_cost(const Vector& x) const override { return base_->terminal_cost(x); }
  std::optional<DynamicsJacobians> step_jacobians(const Vector& x,
                                                  const Vector& u) const override {
    return base_->step_jacobians(x, u);
  }
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override;
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override {
    return base_->terminal_cost_expansion(x);
  }
  std::optional<Vector> inverse_step(const Vector& x_next, const Vector& u) const override {
    return base_->inverse_step(x_next, u);
  }
  bool invertible() const override { return base_->invertible(); }
  Vector nominal_control() const override { return base_->nominal_control(); }
  bool admissible(const Vector& x) const override { return base_->admissible(x); }

 private:
  ModelPtr base_;
  double c_t_;
};

/// Throws std::invalid_argument when c_t < 0.
ModelPtr with_time_penalty(ModelPtr model, double c_t);

}  // namespace ohddp
