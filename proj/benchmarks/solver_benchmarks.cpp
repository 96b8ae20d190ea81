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

#include <benchmark/benchmark.h>

#include <memory>

#include "ohddp/backward.hpp"
#include "ohddp/models/cartpole.hpp"
#include "ohddp/models/linear_quadratic.hpp"
#include "ohddp/models/point_mass_nav.hpp"
#include "ohddp/models/quadrotor.hpp"
#include "ohddp/mpc.hpp"
#include "ohddp/solver.hpp"
#include "ohddp/trajectory.hpp"

namespace ohddp {
namespace {

CartpoleModel cartpole(double c_t) {
  CartpoleParams p;
  p.c_t = c_t;
  return CartpoleModel(p);
}

void BM_BackwardSweepCartpole(benchmark::State& state) {
  const CartpoleModel m = cartpole(30.0);
  const int T = static_cast<int>(state.range(0));
  std::vector<Vector> controls(T, Vector::Constant(1, 1.0));
  const Trajectory traj = rollout_controls(m, Vector::Zero(4), controls);
  const ExtendedTrajectory e = ExtendedTrajectory::without_prefix(traj);
  BackwardOptions opt;
  opt.second_order = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(backward_sweep(m, e, opt));
  state.SetComplexityN(T);
}
BENCHMARK(BM_BackwardSweepCartpole)
    ->ArgsProduct({{25, 50, 100, 200}, {0, 1}})
    ->Unit(benchmark::kMicrosecond);

void BM_SolveLinear(benchmark::State& state) {
  DoubleIntegratorParams p;
  p.q = 0.0;
  p.qf = 100.0;
  p.c_t = 0.1;
  p.t_max = 200;
  const DoubleIntegratorModel m(p);
  SolverConfig cfg;
  cfg.window = 200;
  cfg.t_max = 200;
  const Trajectory init = default_initial_trajectory(m, (Vector(2) << 1.0, 0.0).finished(), 20);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_trajectory(m, init, cfg));
}
BENCHMARK(BM_SolveLinear)->Unit(benchmark::kMillisecond);

void BM_SolveCartpole(benchmark::State& state) {
  const CartpoleModel m = cartpole(30.0);
  SolverConfig cfg;
  cfg.max_iterations = 500;
  const Trajectory init = default_initial_trajectory(m, Vector::Zero(4), 30);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_trajectory(m, init, cfg));
}
BENCHMARK(BM_SolveCartpole)->Unit(benchmark::kMillisecond);

void BM_SolveQuadrotor(benchmark::State& state) {
  QuadrotorParams p;
  p.c_t = 1.0;
  p.goal.head(3) << 2.0, 1.0, 1.0;
  const QuadrotorModel m(p);
  const SolverConfig cfg;
  const Trajectory init = default_initial_trajectory(m, Vector::Zero(12), 40);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_trajectory(m, init, cfg));
}
BENCHMARK(BM_SolveQuadrotor)->Unit(benchmark::kMillisecond);

void BM_MpcStep(benchmark::State& state) {
  PointMassNavParams p;
  p.goal << 10.0, 0.0;
  p.c_t = 1.0;
  Obstacle o;
  o.center << 5.0, 0.3;
  o.weight = 20.0;
  p.obstacles.push_back(o);
  const PointMassNavModel m(p);
  MpcConfig cfg;
  cfg.solver.t_max = 300;
  SolverConfig s = cfg.solver;
  s.max_iterations = 200;
  Trajectory plan = optimize_trajectory(m, default_initial_trajectory(m, Vector::Zero(4), 50), s).trajectory;
  plan.states.erase(plan.states.begin());
  plan.controls.erase(plan.controls.begin());
  const Vector x = plan.states.front() + Vector::Constant(4, 1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpc_step(m, plan, x, cfg, MpcMode::kOptimalHorizon));
  }
}
BENCHMARK(BM_MpcStep)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace ohddp

BENCHMARK_MAIN();
