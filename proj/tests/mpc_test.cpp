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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "ohddp/models/point_mass_nav.hpp"
#include "ohddp/trajectory.hpp"
#include "test_util.hpp"

namespace ohddp {
namespace {

using testing::relative_diff;

PointMassNavParams scenario(double weight = 20.0) {
  PointMassNavParams p;
  p.goal << 10.0, 0.0;
  p.c_t = 1.0;
  Obstacle o;
  o.center << 5.0, 0.3;
  o.radius = 1.0;
  o.weight = weight;
  p.obstacles.push_back(o);
  return p;
}

PointMassNavParams moving_scenario() {
  PointMassNavParams p = scenario();
  p.obstacles[0].schedule.push_back({0.0, ObstacleEvent::Kind::kVelocity, Eigen::Vector2d(0.0, 0.3)});
  return p;
}

MpcConfig scenario_config() {
  MpcConfig c;
  c.step_limit = 200;
  c.initial_horizon = 50;
  c.receding_horizon = 50;
  c.solver.t_max = 300;
  return c;
}

PlantSchedule moving_plant(const PointMassNavParams& params) {
  auto nav = std::make_shared<PointMassNavModel>(params);
  PlantSchedule plant;
  plant.truth = [nav](double t) -> ModelPtr {
    return std::make_shared<PointMassNavModel>(nav->advanced(t));
  };
  plant.planner_view = [nav](double t) -> ModelPtr {
    return std::make_shared<PointMassNavModel>(nav->advanced(t).snapshot());
  };
  return plant;
}

const Vector& origin() {
  static const Vector x = Vector::Zero(4);
  return x;
}

// Point mass whose cost expansion fails, so that every solve throws.
class BrokenPlanner final : public SystemModel {
 public:
  explicit BrokenPlanner(PointMassNavParams p) : base_(std::move(p)) {}
  std::string name() const override { return "broken"; }
  int state_dim() const override { return 4; }
  int control_dim() const override { return 2; }
  double timestep() const override { return base_.timestep(); }
  Vector step(const Vector& x, const Vector& u) const override { return base_.step(x, u); }
  double running_cost(const Vector& x, const Vector& u) const override {
    return base_.running_cost(x, u);
  }
  double terminal_cost(const Vector& x) const override { return base_.terminal_cost(x); }
  std::optional<CostExpansion> running_cost_expansion(const Vector&, const Vector&) const override {
    throw std::runtime_error("broken: expansion unavailable");
  }

 private:
  PointMassNavModel base_;
};

TEST(MpcConfig, Validation) {
  MpcConfig c;
  EXPECT_NO_THROW(c.validate());
  c.step_limit = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.noise_scale = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.solver.window = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(to_string(MpcMode::kOptimalHorizon), "optimal_horizon");
  EXPECT_EQ(to_string(MpcMode::kRecedingHorizon), "receding_horizon");
}

TEST(Mpc, StaticWorldReproducesOpenLoopPlan) {
  auto model = std::make_shared<PointMassNavModel>(scenario());
  MpcConfig cfg = scenario_config();
  cfg.solver.convergence_tol = 1e-14;
  cfg.solver.gain_tol = 1e-10;
  cfg.initial_iterations = 1000;
  const EpisodeLog log = run_episode(PlantSchedule::fixed(model), origin(), cfg,
                                     MpcMode::kOptimalHorizon);
  SolverConfig open_cfg = cfg.solver;
  open_cfg.max_iterations = 1000;
  const SolverResult open =
      optimize_trajectory(*model, default_initial_trajectory(*model, origin(), 50), open_cfg);
  ASSERT_TRUE(open.converged());
  EXPECT_TRUE(log.terminated);
  EXPECT_EQ(log.initial_horizon, open.horizon);
  ASSERT_EQ(log.steps_used, open.horizon - 1);
  for (int k = 0; k < log.steps_used; ++k) {
    EXPECT_LE((log.steps[k].state - open.trajectory.states[k]).lpNorm<Eigen::Infinity>(), 1e-8)
        << "step " << k;
    EXPECT_LE((log.steps[k].action - open.trajectory.controls[k]).lpNorm<Eigen::Infinity>(), 1e-8)
        << "step " << k;
  }
  EXPECT_LE((log.final_state - open.trajectory.states[log.steps_used]).lpNorm<Eigen::Infinity>(),
            1e-8);
}

TEST(Mpc, StaticWorldHorizonCountsDown) {
  auto model = std::make_shared<PointMassNavModel>(scenario());
  const EpisodeLog log = run_episode(PlantSchedule::fixed(model), origin(), scenario_config(),
                                     MpcMode::kOptimalHorizon);
  ASSERT_TRUE(log.terminated);
  ASSERT_FALSE(log.steps.empty());
  EXPECT_EQ(log.steps.front().planned_horizon, log.initial_horizon);
  for (size_t k = 1; k < log.steps.size(); ++k) {
    EXPECT_EQ(log.steps[k].planned_horizon, log.steps[k - 1].planned_horizon - 1) << "step " << k;
  }
  EXPECT_EQ(log.steps.back().planned_horizon, 2);
}

TEST(Mpc, VanishingObstacleShortensHorizon) {
  PointMassNavParams stay = scenario(100.0);
  PointMassNavParams gone = stay;
  gone.obstacles[0].schedule.push_back({1.0, ObstacleEvent::Kind::kTeleport, Eigen::Vector2d(50.0, 50.0)});
  const MpcConfig cfg = scenario_config();
  const EpisodeLog a = run_episode(moving_plant(stay), origin(), cfg, MpcMode::kOptimalHorizon);
  const EpisodeLog b = run_episode(moving_plant(gone), origin(), cfg, MpcMode::kOptimalHorizon);
  ASSERT_TRUE(a.terminated);
  ASSERT_TRUE(b.terminated);
  // Identical until the obstacle disappears.
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.steps[k].planned_horizon, b.steps[k].planned_horizon);
  bool shorter = false;
  for (int k = 10; k < 13; ++k) shorter |= b.steps[k].planned_horizon < a.steps[k].planned_horizon - 5;
  EXPECT_TRUE(shorter);
  EXPECT_LT(b.steps_used, a.steps_used);
  EXPECT_LT(b.total_cost, a.total_cost);
}

TEST(Mpc, StartAtGoalEndsImmediately) {
  auto model = std::make_shared<PointMassNavModel>(scenario());
  const Vector goal = (Vector(4) << 10.0, 0.0, 0.0, 0.0).finished();
  const EpisodeLog log =
      run_episode(PlantSchedule::fixed(model), goal, scenario_config(), MpcMode::kOptimalHorizon);
  EXPECT_TRUE(log.terminated);
  EXPECT_EQ(log.initial_horizon, 1);
  EXPECT_LE(log.steps_used, 2);
  EXPECT_LE(model->goal_distance(log.final_state), 1e-6);
}

TEST(Mpc, MovingObstacleOptimalHorizonTerminates) {
  const PointMassNavParams p = moving_scenario();
  const MpcConfig cfg = scenario_config();
  const EpisodeLog oh = run_episode(moving_plant(p), origin(), cfg, MpcMode::kOptimalHorizon);
  EXPECT_TRUE(oh.terminated);
  EXPECT_LT(oh.steps_used, cfg.step_limit);
  const PointMassNavModel nav(p);
  EXPECT_LE(nav.goal_distance(oh.final_state), 0.05 * 10.0);
  for (const auto& s : oh.steps) {
    EXPECT_LE(s.iterations, cfg.inner_iterations);
    EXPECT_FALSE(s.degraded);
  }
}

TEST(Mpc, RecedingHorizonRunsToStepLimit) {
  const PointMassNavParams p = moving_scenario();
  MpcConfig cfg = scenario_config();
  cfg.step_limit = 80;
  const EpisodeLog rh = run_episode(moving_plant(p), origin(), cfg, MpcMode::kRecedingHorizon);
  EXPECT_FALSE(rh.terminated);
  EXPECT_EQ(rh.steps_used, 80);
  EXPECT_EQ(rh.initial_horizon, cfg.receding_horizon);
  for (const auto& s : rh.steps) EXPECT_EQ(s.planned_horizon, cfg.receding_horizon);
}

TEST(Mpc, TotalCostIsRealizedCost) {
  const PointMassNavParams p = moving_scenario();
  const PlantSchedule plant = moving_plant(p);
  const EpisodeLog log = run_episode(plant, origin(), scenario_config(), MpcMode::kOptimalHorizon);
  double sum = 0.0;
  double sim_time = 0.0;
  for (const auto& s : log.steps) {
    EXPECT_DOUBLE_EQ(s.sim_time, sim_time);
    const ModelPtr truth = plant.truth(s.sim_time);
    EXPECT_EQ(s.running_cost, truth->running_cost(s.state, s.action));
    sum += s.running_cost;
    sim_time += 0.1;
  }
  const double terminal = plant.truth(sim_time)->terminal_cost(log.final_state);
  EXPECT_LE(relative_diff(log.terminal_cost, terminal), 1e-12);
  EXPECT_LE(relative_diff(log.total_cost, sum + terminal), 1e-12);
}

TEST(Mpc, PlantFollowsTruthModel) {
  const PointMassNavParams p = moving_scenario();
  const PlantSchedule plant = moving_plant(p);
  const EpisodeLog log = run_episode(plant, origin(), scenario_config(), MpcMode::kOptimalHorizon);
  for (size_t k = 0; k + 1 < log.steps.size(); ++k) {
    const Vector next = plant.truth(log.steps[k].sim_time)->step(log.steps[k].state, log.steps[k].action);
    EXPECT_EQ(next, log.steps[k + 1].state);
  }
  // The planner sees a frozen obstacle.
  const PointMassNavModel view = PointMassNavModel(p).advanced(2.0).snapshot();
  EXPECT_TRUE(view.params().obstacles[0].schedule.empty());
  EXPECT_LE((view.params().obstacles[0].center - Eigen::Vector2d(5.0, 0.9)).norm(), 1e-12);
}

TEST(Mpc, DeterministicForFixedSeed) {
  const PointMassNavParams p = moving_scenario();
  MpcConfig cfg = scenario_config();
  cfg.noise_scale = 0.01;
  cfg.seed = 7;
  const EpisodeLog a = run_episode(moving_plant(p), origin(), cfg, MpcMode::kOptimalHorizon);
  const EpisodeLog b = run_episode(moving_plant(p), origin(), cfg, MpcMode::kOptimalHorizon);
  EXPECT_TRUE(a.same_outcome(b));
  cfg.seed = 8;
  const EpisodeLog c = run_episode(moving_plant(p), origin(), cfg, MpcMode::kOptimalHorizon);
  EXPECT_FALSE(a.same_outcome(c));
}

TEST(Mpc, NoiseDegradesGracefully) {
  const PointMassNavParams p = moving_scenario();
  const MpcConfig base = scenario_config();
  const double clean = run_episode(moving_plant(p), origin(), base, MpcMode::kOptimalHorizon).total_cost;
  std::vector<double> costs;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MpcConfig cfg = base;
    cfg.seed = seed;
    cfg.noise_scale = 0.01;
    cfg.noise_state_scale = (Vector(4) << 10.0, 10.0, 1.0, 1.0).finished();
    const EpisodeLog log = run_episode(moving_plant(p), origin(), cfg, MpcMode::kOptimalHorizon);
    EXPECT_TRUE(log.terminated) << "seed " << seed;
    costs.push_back(log.total_cost);
  }
  std::sort(costs.begin(), costs.end());
  const double median = 0.5 * (costs[9] + costs[10]);
  EXPECT_LE(median, 1.25 * clean);
}

TEST(MpcStep, FailedSolveFallsBackToWarmPlan) {
  const PointMassNavModel good(scenario());
  const BrokenPlanner broken(scenario());
  SolverConfig s = scenario_config().solver;
  const Trajectory plan =
      optimize_trajectory(good, default_initial_trajectory(good, origin(), 50), s).trajectory;
  const Vector x = (Vector(4) << 0.05, -0.02, 0.0, 0.0).finished();
  const MpcStepResult r = mpc_step(broken, plan, x, scenario_config(), MpcMode::kOptimalHorizon);
  EXPECT_TRUE(r.degraded);
  EXPECT_EQ(r.action, plan.controls.front());
  EXPECT_EQ(r.horizon, plan.horizon());
  EXPECT_EQ(r.plan.states.front(), x);
  EXPECT_EQ(r.plan.controls, plan.controls);
}

TEST(MpcStep, DegradedEpisodeStillCountsDown) {
  auto good = std::make_shared<PointMassNavModel>(scenario());
  auto broken = std::make_shared<BrokenPlanner>(scenario());
  PlantSchedule plant;
  plant.truth = [good](double) -> ModelPtr { return good; };
  plant.planner_view = [good, broken](double t) -> ModelPtr {
    return t < 0.45 ? ModelPtr(good) : ModelPtr(broken);
  };
  const EpisodeLog log = run_episode(plant, origin(), scenario_config(), MpcMode::kOptimalHorizon);
  EXPECT_TRUE(log.terminated);
  int degraded = 0;
  for (const auto& s : log.steps) {
    EXPECT_EQ(s.degraded, s.sim_time > 0.45);
    degraded += s.degraded;
  }
  EXPECT_GT(degraded, 0);
  EXPECT_EQ(log.steps_used, log.initial_horizon - 1);
}

TEST(MpcStep, RejectsEmptyPlan) {
  const PointMassNavModel m(scenario());
  EXPECT_THROW(mpc_step(m, Trajectory{{origin()}, {}}, origin(), scenario_config(),
                        MpcMode::kOptimalHorizon),
               std::invalid_argument);
}

TEST(MpcStep, WarmStartIsCheap) {
  const PointMassNavModel m(scenario());
  const MpcConfig cfg = scenario_config();
  SolverConfig s = cfg.solver;
  s.max_iterations = 200;
  Trajectory plan = optimize_trajectory(m, default_initial_trajectory(m, origin(), 50), s).trajectory;
  plan.states.erase(plan.states.begin());
  plan.controls.erase(plan.controls.begin());
  const MpcStepResult r = mpc_step(m, plan, plan.states.front(), cfg, MpcMode::kOptimalHorizon);
  EXPECT_FALSE(r.degraded);
  EXPECT_LE(r.iterations, cfg.inner_iterations);
  EXPECT_LE(std::abs(r.horizon - plan.horizon()), 1);
}

}  // namespace
}  // namespace ohddp
