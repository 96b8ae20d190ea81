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

#include "ohddp/lti.hpp"
#include "ohddp/model.hpp"
#include "ohddp/solver.hpp"

namespace ohddp {

struct FixedHorizonRecord {
  int horizon = 0;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
  Trajectory trajectory;
};

struct HorizonSweepResult {
  std::vector<FixedHorizonRecord> records;  // ascending horizon
  int best_horizon = 0;
  double best_cost = 0.0;
};

/// Plain fixed-horizon DDP: window 0 and bounds (T, T), cold-started from
/// the model's nominal control.
FixedHorizonRecord fixed_horizon_ddp(const SystemModel& model, const Vector& x0, int horizon,
                                     const SolverConfig& cfg);

/// fixed_horizon_ddp for every T in [t_lo, t_hi]; argmin over converged
/// entries with ties going to the smaller T. Entries are independent and are
/// evaluated on up to `threads` worker threads; the result does not depend on
/// the thread count. Throws SolverFailure if no entry converged.
HorizonSweepResult exhaustive_horizon(const SystemModel& model, const Vector& x0, int t_lo,
                                      int t_hi, const SolverConfig& cfg, int threads = 1);

struct ValueGridSpec {
  double half_width = 3.0;  // state grid covers [-half_width, half_width]^n
  int points = 121;         // per axis
  double control_half_width = 10.0;
  int control_points = 201;
};

/// Tabulated value function on a regular grid, bilinear between nodes.
class GridValueFunction {
 public:
  GridValueFunction(int dim, const ValueGridSpec& spec, std::vector<double> values);
  double operator()(const Vector& x) const;
  const std::vector<double>& values() const { return values_; }

 private:
  int dim_;
  ValueGridSpec spec_;
  std::vector<double> values_;
};

/// Brute-force dynamic programming for LTI problems with n <= 2 and m = 1:
/// V_0 = Phi, V_s(x) = min_u l(x, u) + V_{s-1}(Ax + Bu), the minimum taken over
/// a dense control grid and refined by golden-section search. Returns
/// V_0..V_{t_max}. Time penalty is included.
std::vector<GridValueFunction> grid_value_iteration(const LtiProblem& problem,
                                                    const ValueGridSpec& spec);

}  // namespace ohddp
