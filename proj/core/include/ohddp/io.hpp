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

#include <nlohmann/json.hpp>

#include "ohddp/lti.hpp"
#include "ohddp/models/cartpole.hpp"
#include "ohddp/models/linear_quadratic.hpp"
#include "ohddp/models/point_mass_nav.hpp"
#include "ohddp/models/quadrotor.hpp"
#include "ohddp/mpc.hpp"
#include "ohddp/oracle.hpp"
#include "ohddp/solver.hpp"

namespace ohddp::io {

using Json = nlohmann::json;

/// Invalid or unreadable configuration. The message starts with the
/// offending field path (e.g. "solver.window") or file path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Reader for one JSON object that rejects unknown keys and reports errors
/// under `path`.
class Fields {
 public:
  Fields(const Json& j, std::string path);

  bool has(const std::string& key) const;
  const Json& raw(const std::string& key) const;
  std::string child(const std::string& key) const { return path_ + "." + key; }

  void get(const std::string& key, double& out) const;
  void get(const std::string& key, int& out) const;
  void get(const std::string& key, bool& out) const;
  void get(const std::string& key, std::string& out) const;
  void get(const std::string& key, std::uint64_t& out) const;
  void get(const std::string& key, Vector& out, int expected_size = -1) const;
  void get(const std::string& key, Eigen::Vector2d& out) const;
  void get(const std::string& key, Eigen::Vector3d& out) const;
  void get(const std::string& key, Matrix& out, int rows, int cols) const;

  /// Throws for keys that were never queried with get/has/raw.
  void finish() const;

 private:
  void touch(const std::string& key) const;
  const Json& j_;
  std::string path_;
  mutable std::vector<std::string> seen_;
};

Vector vector_from_json(const Json& j, const std::string& path, int expected_size = -1);
/// Row-major matrix, either a flat array of rows*cols numbers or nested rows.
Matrix matrix_from_json(const Json& j, const std::string& path, int rows, int cols);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);

LtiProblem lti_problem_from_json(const Json& j, const std::string& path);
Json to_json(const LtiProblem& p);

/// Overlays the keys present in `j` on `base`; "mode": "ilqr" | "ddp" selects
/// second_order.
SolverConfig solver_config_from_json(const Json& j, const std::string& path,
                                     SolverConfig base = {});
Json to_json(const SolverConfig& c);

DoubleIntegratorParams double_integrator_from_json(const Json& j, const std::string& path);
CartpoleParams cartpole_from_json(const Json& j, const std::string& path);
QuadrotorParams quadrotor_from_json(const Json& j, const std::string& path);
PointMassNavParams point_mass_from_json(const Json& j, const std::string& path);
Json to_json(const DoubleIntegratorParams& p);
Json to_json(const CartpoleParams& p);
Json to_json(const QuadrotorParams& p);
Json to_json(const PointMassNavParams& p);

/// Header "t,x0..x{n-1},u0..u{m-1}"; the last row has empty controls.
void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt);
/// Header "iteration,previous_horizon,horizon,cost,alpha,gamma,window".
void write_trace_csv(const std::string& path, const SolverResult& result);
/// Header "T,J,iterations,converged".
void write_horizon_table_csv(const std::string& path, const HorizonSweepResult& sweep);
/// One row per step: step,sim_time,planned_horizon,solve_seconds,iterations,
/// running_cost,degraded,x...,u...
void write_episode_csv(const std::string& path, const EpisodeLog& log);

Json to_json(const EpisodeLog& log);
Json to_json(const CandidateEvaluation& c);
/// Horizon, cost, iterations, status and the final horizon's candidates.
Json summary_json(const SolverResult& result);

}  // namespace ohddp::io
