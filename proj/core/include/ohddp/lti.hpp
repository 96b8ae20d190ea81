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

#include <stdexcept>
#include <string>
#include <vector>

#include "ohddp/types.hpp"

namespace ohddp {

/// Linear dynamics x' = A x + B u with running cost 1/2 (x'Qx + u'Ru) + c_t
/// and terminal cost 1/2 x'Qf x. The horizon is a decision variable bounded
/// by [t_min, t_max].
struct LtiProblem {
  Matrix A;
  Matrix B;
  Matrix Q;
  Matrix R;
  Matrix Qf;
  int t_min = 1;
  int t_max = 1;
  double c_t = 0.0;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int control_dim() const { return static_cast<int>(B.cols()); }

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Thrown when R + B'PB cannot be factorized.
class IllPosedStep : public std::runtime_error {
 public:
  IllPosedStep(const std::string& what, double rcond, int step_index = -1)
      : std::runtime_error(what), rcond_(rcond), step_index_(step_index) {}
  double rcond() const { return rcond_; }
  int step_index() const { return step_index_; }

 private:
  double rcond_;
  int step_index_;
};

/// Value matrices indexed by steps-to-go: P[0] = Qf, P[s] has s steps left.
struct RiccatiSequence {
  std::vector<Matrix> P;

  const Matrix& steps_to_go(int s) const { return P.at(static_cast<size_t>(s)); }
  int max_steps() const { return static_cast<int>(P.size()) - 1; }
};

/// One backward step of the discrete Riccati recursion, symmetrized.
Matrix riccati_step(const Matrix& P_next, const LtiProblem& problem);

/// Feedback gain K (u = K x) that is optimal for one step ahead of P_next.
Matrix lqr_gain(const Matrix& P_next, const LtiProblem& problem);

/// P[0..t_max]. Errors from riccati_step are rethrown with the step index.
RiccatiSequence riccati_sweep(const LtiProblem& problem);
/// P[0..steps]; steps = 0 gives {Qf}.
RiccatiSequence riccati_sweep(const LtiProblem& problem, int steps);

/// Absorbs a constant per-step cost into an extra state that is held at 1.
/// The returned problem has c_t = 0 and state dimension n + 1.
///
/// The extra diagonal entry of Q is 2 c_t so that the quadratic running cost
/// 1/2 x'Qx contributes exactly c_t per step.
LtiProblem augment_time_penalty(const LtiProblem& problem, double c_t);

struct HorizonCost {
  int horizon;
  double cost;
};

struct LtiHorizonResult {
  int best_horizon = 0;
  double best_cost = 0.0;
  std::vector<HorizonCost> curve;  // one entry per T in [t_min, t_max]
};

/// Exact optimal horizon by evaluating 1/2 x0' P[T] x0 for every admissible T.
/// When problem.c_t > 0 the time penalty is applied through state
/// augmentation; x0 is always given in the unaugmented coordinates.
LtiHorizonResult lti_optimal_horizon(const LtiProblem& problem, const Vector& x0);

/// Same, reusing a precomputed sweep of `sweep_problem` (which must already
/// include any augmentation).
LtiHorizonResult lti_optimal_horizon(const LtiProblem& sweep_problem,
                                     const RiccatiSequence& sequence,
                                     const Vector& x0_sweep_coords);

/// Cost of the closed-loop LQR policy rolled out for T steps from x0
/// (time penalty included). Used to check the quadratic value formula.
double lqr_rollout_cost(const LtiProblem& problem, const Vector& x0, int horizon);

}  // namespace ohddp
