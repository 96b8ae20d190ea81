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

#include <stdexcept>
#include <string>
#include <vector>

#include "ohddp/derivatives.hpp"
#include "ohddp/model.hpp"
#include "ohddp/trajectory.hpp"

namespace ohddp {

/// V(x) ~ 1/2 dx' V_xx dx + V_x' dx + V_0 with dx = x - xbar_t.
struct ValueExpansion {
  Matrix V_xx;
  Vector V_x;
  double V_0 = 0.0;

  double evaluate(const Vector& dx) const { return 0.5 * dx.dot(V_xx * dx) + V_x.dot(dx) + V_0; }
};

/// Quadratic model of l(x, u) + V_{t+1}(f(x, u)) around the nominal pair.
struct QExpansion {
  Matrix Q_xx;
  Matrix Q_ux;  // m x n
  Matrix Q_uu;
  Vector Q_x;
  Vector Q_u;
  double Q_0 = 0.0;
};

/// du_t = K_t dx_t + k_t, stored for t = t0_offset, t0_offset + 1, ...
struct FeedbackPolicy {
  std::vector<Matrix> K;
  std::vector<Vector> k;
  int t0_offset = 0;

  int size() const { return static_cast<int>(K.size()); }
  const Matrix& gain_at(int t) const { return K.at(static_cast<size_t>(t - t0_offset)); }
  const Vector& feedforward_at(int t) const { return k.at(static_cast<size_t>(t - t0_offset)); }
};

/// A nominal trajectory extended backwards in time by a prefix of
/// prefix_length knots, so that time runs from -prefix_length to horizon().
struct ExtendedTrajectory {
  int prefix_length = 0;
  std::vector<Vector> states;    // t = -prefix_length .. T
  std::vector<Vector> controls;  // t = -prefix_length .. T - 1
  bool prefix_feasible = true;   // false when the prefix is not dynamically consistent

  int horizon() const { return static_cast<int>(controls.size()) - prefix_length; }
  const Vector& state_at(int t) const { return states.at(static_cast<size_t>(t + prefix_length)); }
  const Vector& control_at(int t) const {
    return controls.at(static_cast<size_t>(t + prefix_length));
  }
  /// The t >= 0 part.
  Trajectory nominal() const;

  static ExtendedTrajectory without_prefix(const Trajectory& traj);
};

struct BackwardResult {
  std::vector<ValueExpansion> value;  // t = -prefix_length .. T
  FeedbackPolicy policy;              // t = -prefix_length .. T - 1
  double gamma_used = 0.0;
  // Per-step model-predicted cost change terms k'Q_u and 1/2 k'Q_uu k.
  std::vector<double> dv_linear;
  std::vector<double> dv_quadratic;

  int first_time() const { return policy.t0_offset; }
  int horizon() const { return static_cast<int>(value.size()) - 1 + policy.t0_offset; }
  const ValueExpansion& value_at(int t) const {
    return value.at(static_cast<size_t>(t - policy.t0_offset));
  }
  /// Predicted change of cost when applying alpha * k over [t_begin, T).
  double expected_improvement(int t_begin, double alpha) const;
  /// max_t |k_t|_inf over [t_begin, T).
  double max_feedforward(int t_begin) const;
};

/// Q_uu could not be factorized; carries the smallest eigenvalue found.
class NeedsRegularization : public std::runtime_error {
 public:
  NeedsRegularization(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Unrecoverable solver-level failure (e.g. regularization exhausted).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bellman backup of `next` through the local expansions. Tensor
/// contractions V_x . f_(..) are included only when `second_order` is set and
/// the tensors are present.
QExpansion q_expansion(const CostExpansion& cost, const DynamicsExpansion& dyn,
                       const ValueExpansion& next, bool second_order);

/// Q_uu <- Q_uu + max(0, gamma - lambda_min(Q_uu)) I.
QExpansion regularize(QExpansion q, double gamma);

struct ValueStep {
  ValueExpansion value;
  Matrix K;
  Vector k;
};

/// Minimizes the Q model over du: K = -Q_uu^-1 Q_ux, k = -Q_uu^-1 Q_u and the
/// resulting value expansion. Throws NeedsRegularization if Q_uu is not PD.
ValueStep value_recurrence(const QExpansion& q);

struct BackwardOptions {
  double gamma = 1e-6;
  double gamma_growth = 10.0;
  double gamma_max = 1e6;
  bool second_order = false;
  DerivativeSource source = DerivativeSource::kAuto;
};

/// Sweeps from the terminal knot of `traj` down to t = -prefix_length. On a
/// factorization failure gamma is multiplied by gamma_growth and the sweep
/// restarts; SolverFailure is thrown once gamma would exceed gamma_max.
BackwardResult backward_sweep(const SystemModel& model, const ExtendedTrajectory& traj,
                              const BackwardOptions& options = {});

}  // namespace ohddp
