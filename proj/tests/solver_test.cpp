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

#include "ohddp/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ohddp/lti.hpp"
#include "ohddp/models/cartpole.hpp"
#include "ohddp/models/linear_quadratic.hpp"
#include "ohddp/models/quadrotor.hpp"
#include "ohddp/oracle.hpp"
#include "ohddp/trajectory.hpp"
#include "test_util.hpp"

namespace ohddp {
namespace {

using testing::random_lq_problem;
using testing::relative_diff;
using testing::Rng;
using testing::scaled_diff;

constexpr double kInf = std::numeric_limits<double>::infinity();

DoubleIntegratorParams linear_params() {
  DoubleIntegratorParams p;
  p.dt = 0.1;
  p.q = 0.0;
  p.r = 1.0;
  p.qf = 100.0;
  p.c_t = 0.1;
  p.t_min = 1;
  p.t_max = 200;
  return p;
}

SolverConfig linear_config() {
  SolverConfig c;
  c.window = 200;
  c.t_min = 1;
  c.t_max = 200;
  return c;
}

const Vector& displaced() {
  static const Vector x = (Vector(2) << 1.0, 0.0).finished();
  return x;
}

void expect_solver_invariants(const SystemModel& model, const SolverResult& r,
                              const SolverConfig& cfg, double initial_cost) {
  double prev = initial_cost;
  for (const auto& rec : r.trace) {
    EXPECT_LT(rec.cost, prev) << "iteration " << rec.iteration;
    prev = rec.cost;
    EXPECT_LE(std::abs(rec.horizon - rec.previous_horizon), rec.window);
    EXPECT_LE(rec.window, cfg.window);
    EXPECT_GE(rec.horizon, cfg.t_min);
    EXPECT_LE(rec.horizon, cfg.t_max);
  }
  EXPECT_EQ(r.trajectory.horizon(), r.horizon);
  EXPECT_LE(relative_diff(r.cost, evaluate_cost(model, r.trajectory)), 1e-10);
  EXPECT_LE(dynamic_residual(model, r.trajectory), 1e-8 * std::max(1.0, rms_state_magnitude(r.trajectory)));
}

TEST(SolverConfig, ValidationNamesField) {
  auto expect_field = [](SolverConfig c, const char* field) {
    try {
      c.validate();
      ADD_FAILURE() << "expected failure for " << field;
    } catch (const std::invalid_argument& e) {
      EXPECT_NE(std::string(e.what()).find(std::string("SolverConfig.") + field), std::string::npos)
          << e.what();
    }
  };
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c = {}; c.window = -1; expect_field(c, "window");
  c = {}; c.t_min = 0; expect_field(c, "t_min");
  c = {}; c.t_min = 5; c.t_max = 4; expect_field(c, "t_max");
  c = {}; c.alpha_backtrack = 1.0; expect_field(c, "alpha_backtrack");
  c = {}; c.alpha_min = 2.0; expect_field(c, "alpha_min");
  c = {}; c.trust_radius = 0.0; expect_field(c, "trust_radius");
  c = {}; c.max_iterations = 0; expect_field(c, "max_iterations");
  c = {}; c.gamma_growth = 1.0; expect_field(c, "gamma_growth");
}

TEST(SolverConfig, Defaults) {
  const SolverConfig c;
  EXPECT_EQ(c.window, 10);
  EXPECT_EQ(c.alpha_init, 1.0);
  EXPECT_EQ(c.alpha_backtrack, 0.5);
  EXPECT_EQ(c.alpha_min, 1e-3);
  EXPECT_EQ(c.gamma_init, 1e-6);
  EXPECT_EQ(c.gamma_max, 1e6);
  EXPECT_EQ(c.convergence_tol, 1e-6);
  EXPECT_FALSE(c.second_order);
  EXPECT_FALSE(c.trust_radius.has_value());
}

TEST(ExtendBackward, EmptyForZeroWindow) {
  const CartpoleModel m;
  const Prefix p = extend_backward(m, default_initial_trajectory(m, Vector::Zero(4), 10), 0);
  EXPECT_TRUE(p.states.empty());
  EXPECT_EQ(p.kind, ExtensionKind::kNone);
  EXPECT_THROW(extend_backward(m, default_initial_trajectory(m, Vector::Zero(4), 10), -1),
               std::invalid_argument);
}

TEST(ExtendBackward, FixedPointRepeats) {
  const CartpoleModel m;
  const Trajectory t = default_initial_trajectory(m, Vector::Zero(4), 10);
  const Prefix p = extend_backward(m, t, 5);
  EXPECT_EQ(p.kind, ExtensionKind::kFixedPoint);
  ASSERT_EQ(p.states.size(), 5u);
  for (int s = 0; s < 5; ++s) {
    EXPECT_EQ(p.states[s], t.states[0]);
    EXPECT_EQ(p.controls[s], t.controls[0]);
  }
}

TEST(ExtendBackward, RestControlHoldsState) {
  const QuadrotorModel m;
  std::vector<Vector> controls(8, m.hover_control() + Vector::Constant(4, 0.01));
  const Trajectory t = rollout_controls(m, Vector::Zero(12), controls);
  const Prefix p = extend_backward(m, t, 3);
  EXPECT_EQ(p.kind, ExtensionKind::kRestControl);
  EXPECT_EQ(p.controls[0], m.hover_control());
  EXPECT_EQ(p.states[2], t.states[0]);
}

TEST(ExtendBackward, InvertsLinearDynamics) {
  Rng rng(1);
  const LtiProblem prob = random_lq_problem(rng, 3, 2, 20, 0.0);
  const LinearQuadraticModel m(prob);
  std::vector<Vector> controls{rng.gaussian(2), rng.gaussian(2)};
  const Trajectory t = rollout_controls(m, rng.gaussian(3), controls);
  const Prefix p = extend_backward(m, t, 6);
  ASSERT_EQ(p.kind, ExtensionKind::kInverse);
  const ExtendedTrajectory e = attach_prefix(t, p);
  for (int s = -6; s < 0; ++s) {
    const Vector next = m.step(e.state_at(s), e.control_at(s));
    EXPECT_LE((next - e.state_at(s + 1)).norm(), 1e-10);
    EXPECT_EQ(e.control_at(s), t.controls[0]);
  }
}

TEST(ExtendBackward, NewtonInvertsCartpole) {
  const CartpoleModel m;
  std::vector<Vector> controls(5, Vector::Constant(1, 2.0));
  const Trajectory t = rollout_controls(m, (Vector(4) << 0.0, 0.3, 0.5, 0.2).finished(), controls);
  const Prefix p = extend_backward(m, t, 4);
  ASSERT_EQ(p.kind, ExtensionKind::kInverse);
  const ExtendedTrajectory e = attach_prefix(t, p);
  for (int s = -4; s < 0; ++s) {
    EXPECT_LE((m.step(e.state_at(s), e.control_at(s)) - e.state_at(s + 1)).lpNorm<Eigen::Infinity>(),
              1e-10);
  }
}

TEST(ExtendBackward, SingularDynamicsAreMarkedInfeasible) {
  LtiProblem prob;
  prob.A = Matrix::Zero(2, 2);
  prob.A(0, 1) = 1.0;
  prob.B = (Matrix(2, 1) << 0.0, 1.0).finished();
  prob.Q = prob.Qf = Matrix::Identity(2, 2);
  prob.R = Matrix::Identity(1, 1);
  prob.t_max = 20;
  const LinearQuadraticModel m(prob);
  ASSERT_FALSE(m.invertible());
  const Trajectory t = default_initial_trajectory(m, Vector::Ones(2), 10);
  const Prefix p = extend_backward(m, t, 3);
  EXPECT_EQ(p.kind, ExtensionKind::kInfeasible);
  EXPECT_FALSE(p.feasible());

  const ExtendedTrajectory e = attach_prefix(t, p);
  const BackwardResult back = backward_sweep(m, e);
  SolverConfig cfg;
  cfg.t_max = 20;
  for (const auto& c : evaluate_candidates(back, e, t.states[0], cfg, 3, kInf)) {
    EXPECT_EQ(c.admissible, c.t0 >= 0) << "T=" << c.horizon;
  }
}

TEST(EvaluateCandidates, CurrentHorizonAtNominalStartIsV0) {
  const CartpoleModel m;
  Rng rng(2);
  std::vector<Vector> controls;
  for (int t = 0; t < 20; ++t) controls.push_back(rng.gaussian(1));
  const Trajectory t = rollout_controls(m, Vector::Zero(4), controls);
  const ExtendedTrajectory e = attach_prefix(t, extend_backward(m, t, 3));
  const BackwardResult back = backward_sweep(m, e);
  SolverConfig cfg;
  const auto cands = evaluate_candidates(back, e, t.states[0], cfg, 3, kInf);
  ASSERT_EQ(cands.size(), 7u);
  EXPECT_EQ(cands.front().horizon, 17);
  EXPECT_EQ(cands.back().horizon, 23);
  for (const auto& c : cands) {
    if (c.horizon == 20) {
      EXPECT_EQ(c.predicted_cost, back.value_at(0).V_0);
      EXPECT_EQ(c.distance, 0.0);
      EXPECT_EQ(c.t0, 0);
    }
  }
}

TEST(EvaluateCandidates, WindowClippedByBounds) {
  const CartpoleModel m;
  const Trajectory t = default_initial_trajectory(m, Vector::Zero(4), 5);
  const ExtendedTrajectory e = attach_prefix(t, extend_backward(m, t, 10));
  const BackwardResult back = backward_sweep(m, e);
  SolverConfig cfg;
  cfg.t_min = 3;
  cfg.t_max = 9;
  const auto cands = evaluate_candidates(back, e, t.states[0], cfg, 10, kInf);
  ASSERT_EQ(cands.size(), 7u);
  EXPECT_EQ(cands.front().horizon, 3);
  EXPECT_EQ(cands.back().horizon, 9);
}

TEST(EvaluateCandidates, MatchesRiccatiOnConvergedLinearNominal) {
  const DoubleIntegratorModel m(linear_params());
  const SolverResult r =
      optimize_trajectory(m, default_initial_trajectory(m, displaced(), 40), linear_config());
  ASSERT_TRUE(r.converged());
  const int S = 15;
  const ExtendedTrajectory e = attach_prefix(r.trajectory, extend_backward(m, r.trajectory, S));
  BackwardOptions opt;
  opt.gamma = 0.0;
  const BackwardResult back = backward_sweep(m, e, opt);
  const LtiHorizonResult exact = lti_optimal_horizon(m.problem(), displaced());
  const auto cands = evaluate_candidates(back, e, displaced(), linear_config(), S, kInf);
  ASSERT_EQ(cands.size(), 2u * S + 1);
  for (const auto& c : cands) {
    EXPECT_LE(relative_diff(c.predicted_cost, exact.curve[c.horizon - 1].cost), 1e-9)
        << "T=" << c.horizon;
  }
}

TEST(EvaluateCandidates, TrustRadiusExcludesFarStarts) {
  const CartpoleModel m;
  std::vector<Vector> controls(20, Vector::Constant(1, 5.0));
  const Trajectory t = rollout_controls(m, (Vector(4) << 0.0, 0.0, 0.5, 0.0).finished(), controls);
  const ExtendedTrajectory e = attach_prefix(t, extend_backward(m, t, 5));
  const BackwardResult back = backward_sweep(m, e);
  SolverConfig cfg;
  const double radius = 0.2;
  for (const auto& c : evaluate_candidates(back, e, t.states[0], cfg, 5, radius)) {
    EXPECT_EQ(c.admissible, c.distance == 0.0 || c.distance < radius) << "T=" << c.horizon;
    if (c.t0 == 0) EXPECT_TRUE(c.admissible);
  }
}

CandidateEvaluation cand(int T, double J, bool ok = true) {
  CandidateEvaluation c;
  c.horizon = T;
  c.predicted_cost = J;
  c.admissible = ok;
  return c;
}

TEST(SelectHorizon, Argmin) {
  EXPECT_EQ(select_horizon({cand(9, 5.0), cand(10, 3.0), cand(11, 4.0)}), 10);
}

TEST(SelectHorizon, TiesGoToSmallerHorizon) {
  EXPECT_EQ(select_horizon({cand(12, 2.0), cand(10, 2.0), cand(11, 2.0)}), 10);
}

TEST(SelectHorizon, InadmissibleAreSkipped) {
  EXPECT_EQ(select_horizon({cand(9, 1.0, false), cand(10, 3.0), cand(11, 4.0)}), 10);
  EXPECT_FALSE(select_horizon({cand(9, 1.0, false)}).has_value());
  EXPECT_FALSE(select_horizon({}).has_value());
}

TEST(Rollout, ZeroStepReproducesNominal) {
  const CartpoleModel m;
  Rng rng(3);
  std::vector<Vector> controls;
  for (int t = 0; t < 25; ++t) controls.push_back(rng.gaussian(1));
  const Trajectory t = rollout_controls(m, Vector::Zero(4), controls);
  const ExtendedTrajectory e = ExtendedTrajectory::without_prefix(t);
  const BackwardResult back = backward_sweep(m, e);
  const RolloutResult r = rollout(m, back, e, 0, 0.0, t.states[0]);
  EXPECT_EQ(r.trajectory.states, t.states);
  EXPECT_EQ(r.trajectory.controls, t.controls);
  EXPECT_EQ(r.cost, evaluate_cost(m, t));
}

TEST(Rollout, LinearFullStepIsOptimal) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const LtiProblem p = random_lq_problem(rng, 3, 2, 30, 0.2);
    const LinearQuadraticModel m(p);
    std::vector<Vector> controls;
    for (int t = 0; t < 30; ++t) controls.push_back(rng.gaussian(2));
    const Vector x0 = rng.gaussian(3);
    const Trajectory t = rollout_controls(m, x0, controls);
    const ExtendedTrajectory e = ExtendedTrajectory::without_prefix(t);
    const BackwardResult back = backward_sweep(m, e);
    const RolloutResult r = rollout(m, back, e, 0, 1.0, x0);
    EXPECT_LE(relative_diff(r.cost, testing::batch_lqr_cost(p, x0, 30)), 1e-9);
    EXPECT_LE(relative_diff(r.cost, evaluate_cost(m, r.trajectory)), 1e-12);
  }
}

TEST(Rollout, ShiftedStartShortensHorizon) {
  const CartpoleModel m;
  const Trajectory t = default_initial_trajectory(m, Vector::Zero(4), 20);
  const ExtendedTrajectory e = attach_prefix(t, extend_backward(m, t, 4));
  const BackwardResult back = backward_sweep(m, e);
  EXPECT_EQ(rollout(m, back, e, 5, 0.0, t.states[0]).trajectory.horizon(), 15);
  EXPECT_EQ(rollout(m, back, e, -4, 0.0, t.states[0]).trajectory.horizon(), 24);
  EXPECT_THROW(rollout(m, back, e, -5, 1.0, t.states[0]), std::invalid_argument);
  EXPECT_THROW(rollout(m, back, e, 20, 1.0, t.states[0]), std::invalid_argument);
}

TEST(Rollout, LeavingAdmissibleRegionIsInfinite) {
  const QuadrotorModel m;
  const Trajectory t = default_initial_trajectory(m, Vector::Zero(12), 30);
  const ExtendedTrajectory e = ExtendedTrajectory::without_prefix(t);
  BackwardResult back = backward_sweep(m, e);
  for (auto& K : back.policy.K) K.setZero();
  for (auto& k : back.policy.k) k = (Vector(4) << 0.0, 5.0, 0.0, 0.0).finished();
  EXPECT_EQ(rollout(m, back, e, 0, 1.0, t.states[0]).cost, kInf);
}

TEST(OptimizeTrajectory, LinearConvergesInOneIteration) {
  const DoubleIntegratorModel m(linear_params());
  const SolverConfig cfg = linear_config();
  const Trajectory init = default_initial_trajectory(m, displaced(), 20);
  const SolverResult r = optimize_trajectory(m, init, cfg);
  const LtiHorizonResult exact = lti_optimal_horizon(m.problem(), displaced());
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.horizon, exact.best_horizon);
  EXPECT_LE(relative_diff(r.cost, exact.best_cost), 1e-9);
  expect_solver_invariants(m, r, cfg, evaluate_cost(m, init));

  // Gains of the final sweep are the LQR gains.
  ASSERT_TRUE(r.final_backward.has_value());
  const RiccatiSequence seq = riccati_sweep(m.problem());
  for (int t = 0; t < r.horizon; ++t) {
    const Matrix K = lqr_gain(seq.P[r.horizon - t - 1], m.problem());
    EXPECT_LE(scaled_diff(r.final_backward->policy.gain_at(t), K), 1e-9) << "t=" << t;
  }
}

TEST(OptimizeTrajectory, RandomLinearProblemsConvergeInOneIteration) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(1, 4);
    LtiProblem p = random_lq_problem(rng, n, rng.integer(1, 2), 60, rng.uniform(0.05, 0.5));
    const LinearQuadraticModel m(p);
    const Vector x0 = 2.0 * rng.gaussian(n);
    SolverConfig cfg;
    cfg.window = 60;
    cfg.t_max = 60;
    const SolverResult r = optimize_trajectory(m, default_initial_trajectory(m, x0, 30), cfg);
    const LtiHorizonResult exact = lti_optimal_horizon(p, x0);
    EXPECT_EQ(r.iterations, 1) << "trial " << trial;
    EXPECT_EQ(r.horizon, exact.best_horizon) << "trial " << trial;
    EXPECT_LE(relative_diff(r.cost, exact.best_cost), 1e-9);
  }
}

TEST(OptimizeTrajectory, AlreadyOptimalIsFixedPoint) {
  const DoubleIntegratorModel m(linear_params());
  const SolverResult first =
      optimize_trajectory(m, default_initial_trajectory(m, displaced(), 20), linear_config());
  const SolverResult again = optimize_trajectory(m, first.trajectory, linear_config());
  EXPECT_TRUE(again.converged());
  EXPECT_EQ(again.iterations, 1);
  EXPECT_TRUE(again.trace.empty());
  EXPECT_EQ(again.trajectory.states, first.trajectory.states);
  EXPECT_EQ(again.trajectory.controls, first.trajectory.controls);
  EXPECT_LE(again.max_feedforward, 1e-8);
}

TEST(OptimizeTrajectory, HorizonCanGrowThroughPrefix) {
  const DoubleIntegratorModel m(linear_params());
  SolverConfig cfg = linear_config();
  cfg.window = 10;
  const SolverResult r = optimize_trajectory(m, default_initial_trajectory(m, displaced(), 5), cfg);
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.horizon, 35);
  EXPECT_EQ(r.trajectory.states[0], displaced());
  expect_solver_invariants(m, r, cfg, evaluate_cost(m, default_initial_trajectory(m, displaced(), 5)));
  bool grew = false;
  for (const auto& rec : r.trace) grew |= rec.horizon > rec.previous_horizon;
  EXPECT_TRUE(grew);
}

TEST(OptimizeTrajectory, CartpoleInvariants) {
  CartpoleParams p;
  p.c_t = 30.0;
  const CartpoleModel m(p);
  SolverConfig cfg;
  cfg.t_max = 1000;
  cfg.max_iterations = 500;
  const Trajectory init = default_initial_trajectory(m, Vector::Zero(4), 30);
  const SolverResult r = optimize_trajectory(m, init, cfg);
  EXPECT_TRUE(r.converged());
  EXPECT_LE(r.iterations, 50);
  expect_solver_invariants(m, r, cfg, evaluate_cost(m, init));
}

TEST(OptimizeTrajectory, QuadrotorInvariants) {
  QuadrotorParams p;
  p.c_t = 1.0;
  p.goal.head(3) << 2.0, 1.0, 1.0;
  const QuadrotorModel m(p);
  const SolverConfig cfg;
  const Trajectory init = default_initial_trajectory(m, Vector::Zero(12), 40);
  const SolverResult r = optimize_trajectory(m, init, cfg);
  EXPECT_TRUE(r.converged());
  expect_solver_invariants(m, r, cfg, evaluate_cost(m, init));
}

TEST(OptimizeTrajectory, CandidateSelectionNearOptimumAfterOneIteration) {
  CartpoleParams p;
  p.c_t = 30.0;
  const CartpoleModel m(p);
  SolverConfig cfg;
  cfg.t_max = 1000;
  cfg.max_iterations = 500;
  const SolverResult conv = optimize_trajectory(m, default_initial_trajectory(m, Vector::Zero(4), 30), cfg);
  ASSERT_TRUE(conv.converged());
  for (int T0 : {21, 27}) {
    const FixedHorizonRecord nom = fixed_horizon_ddp(m, Vector::Zero(4), T0, cfg);
    ASSERT_TRUE(nom.converged);
    const int S = T0 - 1;
    const ExtendedTrajectory e = attach_prefix(nom.trajectory, extend_backward(m, nom.trajectory, S));
    const BackwardResult back = backward_sweep(m, e);
    const auto best = select_horizon(evaluate_candidates(back, e, Vector::Zero(4), cfg, S, kInf));
    ASSERT_TRUE(best.has_value());
    EXPECT_LE(std::abs(*best - conv.horizon), 0.1 * conv.horizon) << "T0=" << T0;
  }
}

TEST(OptimizeTrajectory, RejectsBadInitialTrajectory) {
  const CartpoleModel m;
  Trajectory t = default_initial_trajectory(m, Vector::Zero(4), 10);
  SolverConfig cfg;
  cfg.t_max = 5;
  EXPECT_THROW(optimize_trajectory(m, t, cfg), std::invalid_argument);
  cfg.t_max = 100;
  t.states[5][0] += 1.0;
  EXPECT_THROW(optimize_trajectory(m, t, cfg), std::invalid_argument);
}

TEST(OptimizeTrajectory, IterationBudgetIsRespected) {
  CartpoleParams p;
  p.c_t = 30.0;
  const CartpoleModel m(p);
  SolverConfig cfg;
  cfg.max_iterations = 3;
  const SolverResult r = optimize_trajectory(m, default_initial_trajectory(m, Vector::Zero(4), 30), cfg);
  EXPECT_EQ(r.status, SolverStatus::kMaxIterations);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(to_string(r.status), "max_iterations");
}

TEST(OptimizeTrajectory, Deterministic) {
  CartpoleParams p;
  p.c_t = 10.0;
  const CartpoleModel m(p);
  SolverConfig cfg;
  cfg.max_iterations = 200;
  const Trajectory init = default_initial_trajectory(m, Vector::Zero(4), 40);
  const SolverResult a = optimize_trajectory(m, init, cfg);
  const SolverResult b = optimize_trajectory(m, init, cfg);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.horizon, b.horizon);
  EXPECT_EQ(a.trajectory.states, b.trajectory.states);
  EXPECT_EQ(a.iterations, b.iterations);
}

}  // namespace
}  // namespace ohddp
