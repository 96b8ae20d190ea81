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

/// Change in an obstacle's motion at a given simulation time. A velocity
/// event sets a new constant velocity; a teleport event moves the center.
struct ObstacleEvent {
  enum class Kind { kVelocity, kTeleport };
  double time = 0.0;
  Kind kind = Kind::kVelocity;
  Eigen::Vector2d value = Eigen::Vector2d::Zero();
};

/// Gaussian cost bump weight * exp(-|p - center|^2 / (2 radius^2)).
struct Obstacle {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  double weight = 1.0;
  std::vector<ObstacleEvent> schedule;  // sorted by time

  double cost(const Eigen::Vector2d& p) const;
  /// Center after following the schedule for `sim_time` seconds.
  Eigen::Vector2d center_at(double sim_time) const;
};

struct PointMassNavParams {
  double dt = 0.1;
  Eigen::Vector2d goal = Eigen::Vector2d::Zero();
  double w_control = 1.0;
  double w_terminal_position = 100.0;
  double w_terminal_velocity = 10.0;
  double c_t = 0.0;
  std::vector<Obstacle> obstacles;
};

/// Planar point mass with directly controlled acceleration. State
/// (px, py, vx, vy); the discrete map is the exact zero-order-hold solution.
class PointMassNavModel final : public SystemModel {
 public:
  explicit PointMassNavModel(PointMassNavParams params = {});

  const PointMassNavParams& params() const { return params_; }

  /// Model with every obstacle moved along its schedule by `sim_time`. The
  /// remaining schedule is rebased so that t = 0 is the new present.
  PointMassNavModel advanced(double sim_time) const;
  /// Same obstacles frozen in place with no schedule: what a planner sees.
  PointMassNavModel snapshot() const;

  double goal_distance(const Vector& x) const;

  std::string name() const override { return "point_mass"; }
  int state_dim() const override { return 4; }
  int control_dim() const override { return 2; }
  double timestep() const override { return params_.dt; }

  Vector step(const Vector& x, const Vector& u) const override;
  double running_cost(const Vector& x, const Vector& u) const override;
  double terminal_cost(const Vector& x) const override;
  std::optional<DynamicsJacobians> step_jacobians(const Vector& x,
                                                  const Vector& u) const override;
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override;
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override;
  std::optional<Vector> inverse_step(const Vector& x_next, const Vector& u) const override;
  bool invertible() const override { return true; }

 private:
  PointMassNavParams params_;
};

/// Free function form of PointMassNavModel::advanced.
PointMassNavModel obstacle_schedule_advance(const PointMassNavModel& model, double sim_time);

}  // namespace ohddp
