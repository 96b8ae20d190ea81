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

#include <vector>

#include "ohddp/model.hpp"

namespace ohddp {

/// Nominal knot points: states x_0..x_T and controls u_0..u_{T-1}.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> controls;

  int horizon() const { return static_cast<int>(controls.size()); }
  const Vector& initial_state() const { return states.front(); }
  const Vector& final_state() const { return states.back(); }
};

/// sum_t l(x_t, u_t) + Phi(x_T).
double evaluate_cost(const SystemModel& model, const Trajectory& traj);

/// Simulates `controls` from x0. The result is dynamically consistent.
Trajectory rollout_controls(const SystemModel& model, const Vector& x0,
                            const std::vector<Vector>& controls);

/// Cold start: the model's nominal control held for `horizon` steps.
Trajectory default_initial_trajectory(const SystemModel& model, const Vector& x0, int horizon);

/// max_t |f(x_t, u_t) - x_{t+1}|_inf.
double dynamic_residual(const SystemModel& model, const Trajectory& traj);

/// sqrt(mean_t |x_t|^2).
double rms_state_magnitude(const Trajectory& traj);

}  // namespace ohddp
