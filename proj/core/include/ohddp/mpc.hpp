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

#include <cstdint>
#include <functional>
#include <vector>

#include "ohddp/model.hpp"
#include "ohddp/solver.hpp"

namespace ohddp {

enum class MpcMode {
  kOptimalHorizon,  // horizon chosen by the solver; the episode ends when it reaches 1
  kRecedingHorizon, // fixed horizon, runs until the step limit
};

std::string to_string(MpcMode mode);

struct MpcConfig {
  SolverConfig solver;
  int inner_iterations = 5;     // solver budget per MPC step (warm-started)
  int initial_iterations = 200; // budget of the initial solve
  int initial_horizon = 50;
  int receding_horizon = 50;    // horizon used in kRecedingHorizon mode
  double noise_scale = 0.0;     // std-dev of additive plant noise
  Vector noise_state_scale;     // per-state multipliers; empty means all ones
  int step_limit = 500;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Ground truth and planner views of a possibly time-varying system. The
/// planner view at time t must not depend on anything scheduled after t.
struct PlantSchedule {
  std::function<ModelPtr(double sim_time)> truth;
  std::function<ModelPtr(double sim_time)> planner_view;

  static PlantSchedule fixed(ModelPtr model);
};

struct StepRecord {
  int step = 0;
  double sim_time = 0.0;
  Vector state;         // observed state before applying the action
  int planned_horizon;  // horizon of the plan the action came from
  Vector action;
  double solve_seconds = 0.0;
  int iterations = 0;
  double running_cost = 0.0;  // realized on the plant
  bool degraded = false;      // solver failed; previous plan's action applied
};

struct EpisodeLog {
  MpcMode mode = MpcMode::kOptimalHorizon;
  std::vector<StepRecord> steps;
  Vector final_state;
  double terminal_cost = 0.0;
  double total_cost = 0.0;
  int steps_used = 0;
  bool terminated = false;
  double initial_solve_seconds = 0.0;
  int initial_horizon = 0;

  /// Everything except wall-clock timings.
  bool same_outcome(const EpisodeLog& other) const;
};

struct MpcStepResult {
  Vector action;
  Trajectory plan;  // full new plan, action = plan.controls[0]
  int horizon = 0;
  int iterations = 0;
  bool degraded = false;
};

/// Re-optimizes the shifted plan from the observed state with the inner
/// iteration budget.
MpcStepResult mpc_step(const SystemModel& planner_model, const Trajectory& warm_plan,
                       const Vector& observed_x0, const MpcConfig& cfg, MpcMode mode);

EpisodeLog run_episode(const PlantSchedule& plant, const Vector& x_init, const MpcConfig& cfg,
                       MpcMode mode);

}  // namespace ohddp
