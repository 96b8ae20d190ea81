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

#include "ohddp/mpc.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "ohddp/trajectory.hpp"

namespace ohddp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

SolverConfig step_config(const MpcConfig& cfg, MpcMode mode, int warm_horizon, int budget) {
  SolverConfig s = cfg.solver;
  s.max_iterations = budget;
  if (mode == MpcMode::kRecedingHorizon) {
    s.window = 0;
    s.t_min = s.t_max = cfg.receding_horizon;
  } else {
    s.t_min = std::min(s.t_min, warm_horizon);
    s.t_max = std::max(s.t_max, warm_horizon);
  }
  return s;
}

}  // namespace

std::string to_string(MpcMode mode) {
  return mode == MpcMode::kOptimalHorizon ? "optimal_horizon" : "receding_horizon";
}

void MpcConfig::validate() const {
  solver.validate();
  if (step_limit < 1) throw std::invalid_argument("MpcConfig.step_limit: must be >= 1");
  if (inner_iterations < 1) throw std::invalid_argument("MpcConfig.inner_iterations: must be >= 1");
  if (initial_iterations < 1) {
    throw std::invalid_argument("MpcConfig.initial_iterations: must be >= 1");
  }
  if (initial_horizon < 1) throw std::invalid_argument("MpcConfig.initial_horizon: must be >= 1");
  if (receding_horizon < 1) throw std::invalid_argument("MpcConfig.receding_horizon: must be >= 1");
  if (noise_scale < 0.0) throw std::invalid_argument("MpcConfig.noise_scale: must be >= 0");
}

PlantSchedule PlantSchedule::fixed(ModelPtr model) {
  return {[model](double) { return model; }, [model](double) { return model; }};
}

bool EpisodeLog::same_outcome(const EpisodeLog& o) const {
  if (mode != o.mode || steps.size() != o.steps.size() || steps_used != o.steps_used ||
      terminated != o.terminated || total_cost != o.total_cost ||
      terminal_cost != o.terminal_cost || final_state != o.final_state ||
      initial_horizon != o.initial_horizon) {
    return false;
  }
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& a = steps[i];
    const auto& b = o.steps[i];
    if (a.step != b.step || a.sim_time != b.sim_time || a.state != b.state ||
        a.planned_horizon != b.planned_horizon || a.action != b.action ||
        a.iterations != b.iterations || a.running_cost != b.running_cost ||
        a.degraded != b.degraded) {
      return false;
    }
  }
  return true;
}

MpcStepResult mpc_step(const SystemModel& planner_model, const Trajectory& warm_plan,
                       const Vector& observed_x0, const MpcConfig& cfg, MpcMode mode) {
  if (warm_plan.horizon() < 1) throw std::invalid_argument("mpc_step: empty plan");
  MpcStepResult out;
  const Trajectory warm = rollout_controls(planner_model, observed_x0, warm_plan.controls);
  try {
    const SolverConfig s = step_config(cfg, mode, warm.horizon(), cfg.inner_iterations);
    SolverResult r = optimize_trajectory(planner_model, warm, s);
    out.plan = std::move(r.trajectory);
    out.iterations = r.iterations;
  } catch (const std::exception&) {
    out.plan = warm;
    out.degraded = true;
  }
  out.horizon = out.plan.horizon();
  out.action = out.plan.controls.front();
  return out;
}

EpisodeLog run_episode(const PlantSchedule& plant, const Vector& x_init, const MpcConfig& cfg,
                       MpcMode mode) {
  cfg.validate();
  EpisodeLog log;
  log.mode = mode;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const ModelPtr planner0 = plant.planner_view(0.0);
  const double dt = planner0->timestep();
  const Vector noise_scale = cfg.noise_state_scale.size() == x_init.size()
                                 ? cfg.noise_state_scale
                                 : Vector::Ones(x_init.size());

  // Initial computed trajectory.
  const int T_init =
      mode == MpcMode::kRecedingHorizon ? cfg.receding_horizon : cfg.initial_horizon;
  const auto t_start = Clock::now();
  Trajectory plan = default_initial_trajectory(*planner0, x_init, T_init);
  {
    const SolverConfig s = step_config(cfg, mode, T_init, cfg.initial_iterations);
    plan = optimize_trajectory(*planner0, plan, s).trajectory;
  }
  log.initial_solve_seconds = seconds_since(t_start);
  log.initial_horizon = plan.horizon();

  Vector x = x_init;
  double sim_time = 0.0;
  int Tbar = plan.horizon();
  while ((mode == MpcMode::kRecedingHorizon || Tbar > 1) &&
         static_cast<int>(log.steps.size()) < cfg.step_limit) {
    const ModelPtr planner = plant.planner_view(sim_time);
    const auto t0 = Clock::now();
    MpcStepResult step = mpc_step(*planner, plan, x, cfg, mode);
    const double elapsed = seconds_since(t0);

    const ModelPtr truth = plant.truth(sim_time);
    StepRecord rec;
    rec.step = static_cast<int>(log.steps.size());
    rec.sim_time = sim_time;
    rec.state = x;
    rec.planned_horizon = step.horizon;
    rec.action = step.action;
    rec.solve_seconds = elapsed;
    rec.iterations = step.iterations;
    rec.running_cost = truth->running_cost(x, step.action);
    rec.degraded = step.degraded;
    log.total_cost += rec.running_cost;

    Vector next = truth->step(x, step.action);
    if (cfg.noise_scale > 0.0) {
      for (Eigen::Index i = 0; i < next.size(); ++i) {
        next[i] += cfg.noise_scale * noise_scale[i] * normal(rng);
      }
    }
    log.steps.push_back(std::move(rec));

    // Drop the executed knot.
    plan = std::move(step.plan);
    plan.controls.erase(plan.controls.begin());
    plan.states.erase(plan.states.begin());
    if (mode == MpcMode::kRecedingHorizon) {
      plan.controls.push_back(plan.controls.empty() ? step.action : plan.controls.back());
      plan.states.push_back(planner->step(plan.states.back(), plan.controls.back()));
    }
    x = std::move(next);
    sim_time += dt;
    Tbar = plan.horizon();
    if (plan.controls.empty()) break;
  }

  log.final_state = x;
  log.terminal_cost = plant.truth(sim_time)->terminal_cost(x);
  log.total_cost += log.terminal_cost;
  log.steps_used = static_cast<int>(log.steps.size());
  log.terminated = mode == MpcMode::kOptimalHorizon && Tbar <= 1;
  return log;
}

}  // namespace ohddp
