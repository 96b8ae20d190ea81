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

#include "ohddp/backward.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ohddp {

Trajectory ExtendedTrajectory::nominal() const {
  Trajectory t;
  t.states.assign(states.begin() + prefix_length, states.end());
  t.controls.assign(controls.begin() + prefix_length, controls.end());
  return t;
}

ExtendedTrajectory ExtendedTrajectory::without_prefix(const Trajectory& traj) {
  ExtendedTrajectory e;
  e.states = traj.states;
  e.controls = traj.controls;
  return e;
}

double BackwardResult::expected_improvement(int t_begin, double alpha) const {
  double d = 0.0;
  for (int t = t_begin; t < horizon(); ++t) {
    const auto i = static_cast<size_t>(t - policy.t0_offset);
    d += alpha * dv_linear[i] + alpha * alpha * dv_quadratic[i];
  }
  return d;
}

double BackwardResult::max_feedforward(int t_begin) const {
  double m = 0.0;
  for (int t = t_begin; t < horizon(); ++t) {
    m = std::max(m, policy.feedforward_at(t).lpNorm<Eigen::Infinity>());
  }
  return m;
}

QExpansion q_expansion(const CostExpansion& c, const DynamicsExpansion& d,
                       const ValueExpansion& next, bool second_order) {
  QExpansion q;
  const Matrix VxxFx = next.V_xx * d.f_x;
  q.Q_xx = c.l_xx + d.f_x.transpose() * VxxFx;
  q.Q_ux = c.l_ux + d.f_u.transpose() * VxxFx;
  q.Q_uu = c.l_uu + d.f_u.transpose() * next.V_xx * d.f_u;
  q.Q_x = c.l_x + d.f_x.transpose() * next.V_x;
  q.Q_u = c.l_u + d.f_u.transpose() * next.V_x;
  q.Q_0 = c.l + next.V_0;
  if (second_order && d.has_second_order()) {
    for (size_t i = 0; i < d.f_xx.size(); ++i) {
      const double vi = next.V_x[static_cast<Eigen::Index>(i)];
      q.Q_xx += vi * d.f_xx[i];
      q.Q_ux += vi * d.f_ux[i];
      q.Q_uu += vi * d.f_uu[i];
    }
  }
  q.Q_xx = symmetrize(q.Q_xx);
  q.Q_uu = symmetrize(q.Q_uu);
  return q;
}

QExpansion regularize(QExpansion q, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("regularize: gamma must be >= 0");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(q.Q_uu, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double shift = gamma - lambda_min;
  if (shift > 0.0) q.Q_uu.diagonal().array() += shift;
  return q;
}

ValueStep value_recurrence(const QExpansion& q) {
  Eigen::LLT<Matrix> llt(q.Q_uu);
  if (llt.info() != Eigen::Success || !q.Q_uu.allFinite()) {
    double lambda_min = std::numeric_limits<double>::quiet_NaN();
    if (q.Q_uu.allFinite()) {
      lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(q.Q_uu, Eigen::EigenvaluesOnly)
                       .eigenvalues()
                       .minCoeff();
    }
    std::ostringstream os;
    os << "needs regularization: Q_uu is not positive definite (lambda_min = " << lambda_min
       << ")";
    throw NeedsRegularization(os.str(), lambda_min);
  }
  ValueStep s;
  s.K = -llt.solve(q.Q_ux);
  s.k = -llt.solve(q.Q_u);
  s.value.V_xx = symmetrize(q.Q_xx + q.Q_ux.transpose() * s.K);
  s.value.V_x = q.Q_x + q.Q_ux.transpose() * s.k;
  s.value.V_0 = q.Q_0 + 0.5 * q.Q_u.dot(s.k);
  return s;
}

BackwardResult backward_sweep(const SystemModel& model, const ExtendedTrajectory& traj,
                              const BackwardOptions& options) {
  const int S = traj.prefix_length;
  const int T = traj.horizon();
  if (T < 0 || traj.states.size() != traj.controls.size() + 1) {
    throw std::invalid_argument("backward_sweep: states must have one more entry than controls");
  }
  const auto steps = static_cast<size_t>(S + T);

  // Expansions do not depend on gamma; compute them once.
  std::vector<CostExpansion> costs(steps);
  std::vector<DynamicsExpansion> dyns(steps);
  for (size_t i = 0; i < steps; ++i) {
    costs[i] = expand_cost(model, traj.states[i], traj.controls[i], options.source);
    dyns[i] = expand_dynamics(model, traj.states[i], traj.controls[i], options.second_order,
                              options.source);
  }
  const TerminalExpansion terminal = expand_terminal(model, traj.states.back(), options.source);

  double gamma = options.gamma;
  for (;;) {
    BackwardResult out;
    out.gamma_used = gamma;
    out.value.resize(steps + 1);
    out.policy.t0_offset = -S;
    out.policy.K.resize(steps);
    out.policy.k.resize(steps);
    out.dv_linear.resize(steps);
    out.dv_quadratic.resize(steps);
    out.value[steps] = {terminal.phi_xx, terminal.phi_x, terminal.phi};
    try {
      for (size_t i = steps; i-- > 0;) {
        const QExpansion q =
            regularize(q_expansion(costs[i], dyns[i], out.value[i + 1], options.second_order), gamma);
        ValueStep s = value_recurrence(q);
        out.dv_linear[i] = s.k.dot(q.Q_u);
        out.dv_quadratic[i] = 0.5 * s.k.dot(q.Q_uu * s.k);
        out.value[i] = std::move(s.value);
        out.policy.K[i] = std::move(s.K);
        out.policy.k[i] = std::move(s.k);
      }
      return out;
    } catch (const NeedsRegularization& e) {
      gamma = std::max(gamma, 1e-12) * options.gamma_growth;
      if (gamma > options.gamma_max) {
        throw SolverFailure(std::string("backward sweep failed after regularization: ") +
                            e.what());
      }
    }
  }
}

}  // namespace ohddp
