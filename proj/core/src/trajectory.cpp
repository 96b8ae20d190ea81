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

#include "ohddp/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace ohddp {

double evaluate_cost(const SystemModel& model, const Trajectory& traj) {
  if (traj.states.size() != traj.controls.size() + 1) {
    throw std::invalid_argument("evaluate_cost: states must have horizon + 1 entries");
  }
  double cost = 0.0;
  for (size_t t = 0; t < traj.controls.size(); ++t) {
    cost += model.running_cost(traj.states[t], traj.controls[t]);
  }
  return cost + model.terminal_cost(traj.states.back());
}

Trajectory rollout_controls(const SystemModel& model, const Vector& x0,
                            const std::vector<Vector>& controls) {
  Trajectory traj;
  traj.states.reserve(controls.size() + 1);
  traj.states.push_back(x0);
  traj.controls = controls;
  for (const auto& u : controls) traj.states.push_back(model.step(traj.states.back(), u));
  return traj;
}

Trajectory default_initial_trajectory(const SystemModel& model, const Vector& x0, int horizon) {
  if (horizon < 1) throw std::invalid_argument("default_initial_trajectory: horizon must be >= 1");
  return rollout_controls(model, x0,
                          std::vector<Vector>(static_cast<size_t>(horizon), model.nominal_control()));
}

double dynamic_residual(const SystemModel& model, const Trajectory& traj) {
  double r = 0.0;
  for (size_t t = 0; t < traj.controls.size(); ++t) {
    r = std::max(r, (model.step(traj.states[t], traj.controls[t]) - traj.states[t + 1])
                        .lpNorm<Eigen::Infinity>());
  }
  return r;
}

double rms_state_magnitude(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& x : traj.states) acc += x.squaredNorm();
  return std::sqrt(acc / static_cast<double>(traj.states.size()));
}

}  // namespace ohddp
