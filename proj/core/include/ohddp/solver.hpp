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

#include <optional>
#include <string>
#include <vector>

#include "ohddp/backward.hpp"
#include "ohddp/model.hpp"
#include "ohddp/trajectory.hpp"

namespace ohddp {

struct SolverConfig {
  int window = 10;  // candidate horizons Tbar - window .. Tbar + window
  int t_min = 1;
  int t_max = 1000;

  double alpha_init = 1.0;
  double alpha_backtrack = 0.5;
  double alpha_min = 1e-3;

  /// Largest |x0 - xbar_t0| for a candidate to be trusted. Unset means
  /// 10 x the RMS state magnitude of the current nominal.
  std::optional<double> trust_radius;

  double gamma_init = 1e-6;
  double gamma_min = 1e-6;
  double gamma_max = 1e6;
  double gamma_growth = 10.0;
  double gamma_shrink = 2.0;

  int max_iterations = 100;
  double convergence_tol = 1e-6;  // relative cost decrease
  double gain_tol = 1e-6;         // max_t |k_t|_inf
  bool second_order = false;      // full DDP instead of iLQR

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

enum class ExtensionKind {
  kNone,         // empty prefix
  kFixedPoint,   // (xbar_0, ubar_0) is a fixed point, repeated
  kRestControl,  // xbar_0 is held by the model's nominal control, repeated
  kInverse,      // integrated backwards with ubar_0
  kInfeasible,   // constant state without dynamic consistency
};

struct Prefix {
  std::vector<Vector> states;    // t = -S .. -1
  std::vector<Vector> controls;  // t = -S .. -1
  ExtensionKind kind = ExtensionKind::kNone;
  bool feasible() const { return kind != ExtensionKind::kInfeasible; }
};

/// Dynamically feasible knots for t in [-S, 0) ending at xbar_0.
Prefix extend_backward(const SystemModel& model, const Trajectory& traj, int S);

ExtendedTrajectory attach_prefix(const Trajectory& traj, const Prefix& prefix);

/// Previous state x with f(x, u) = x_next: closed form if the model has one,
/// otherwise damped Newton from `guess`. std::nullopt if Newton diverges.
std::optional<Vector> solve_previous_state(const SystemModel& model, const Vector& x_next,
                                           const Vector& u, const Vector& guess);

struct CandidateEvaluation {
  int horizon = 0;
  int t0 = 0;                   // Tbar - horizon
  double predicted_cost = 0.0;  // quadratic value model at x0
  double distance = 0.0;        // |x0 - xbar_t0|
  bool admissible = false;
};

/// One entry per T in [max(t_min, Tbar - window), min(t_max, Tbar + window)].
std::vector<CandidateEvaluation> evaluate_candidates(const BackwardResult& back,
                                                     const ExtendedTrajectory& traj,
                                                     const Vector& x0, const SolverConfig& cfg,
                                                     int window, double trust_radius);

/// Admissible candidate of least predicted cost, smaller horizon on ties.
std::optional<int> select_horizon(const std::vector<CandidateEvaluation>& candidates);

struct RolloutResult {
  Trajectory trajectory;
  double cost = 0.0;  // +inf if the state left the admissible region
};

/// u_t = ubar_t + K_t (x_t - xbar_t) + alpha k_t for t = t0 .. Tbar - 1,
/// starting from x0. The returned trajectory has Tbar - t0 steps.
RolloutResult rollout(const SystemModel& model, const BackwardResult& back,
                      const ExtendedTrajectory& traj, int t0, double alpha, const Vector& x0);

enum class SolverStatus {
  kConverged,
  kMaxIterations,
  kStalled,  // no cost-reducing step after exhausting window and regularization
};

std::string to_string(SolverStatus status);

struct IterationRecord {
  int iteration = 0;
  int previous_horizon = 0;
  int horizon = 0;
  double cost = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  int window = 0;
  std::vector<CandidateEvaluation> candidates;
};

struct SolverResult {
  Trajectory trajectory;
  int horizon = 0;
  double cost = 0.0;
  /// Accepted steps; a pass that only certifies an already-optimal input
  /// counts as one.
  int iterations = 0;
  int backward_sweeps = 0;
  SolverStatus status = SolverStatus::kMaxIterations;
  std::vector<IterationRecord> trace;
  /// Gains from the last backward sweep around `trajectory`, when one was run.
  std::optional<BackwardResult> final_backward;
  double max_feedforward = 0.0;

  bool converged() const { return status == SolverStatus::kConverged; }
};

/// Joint optimization of the controls and the horizon. See README for the
/// iteration structure.
SolverResult optimize_trajectory(const SystemModel& model, const Trajectory& initial,
                                 const SolverConfig& cfg);

}  // namespace ohddp
