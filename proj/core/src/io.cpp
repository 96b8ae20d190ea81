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

#include "ohddp/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ohddp::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << std::setprecision(17);
  return out;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

ObstacleEvent event_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  ObstacleEvent e;
  f.get("time", e.time);
  std::string kind = "velocity";
  f.get("kind", kind);
  if (kind == "velocity") {
    e.kind = ObstacleEvent::Kind::kVelocity;
  } else if (kind == "teleport") {
    e.kind = ObstacleEvent::Kind::kTeleport;
  } else {
    fail(f.child("kind"), "expected \"velocity\" or \"teleport\", got \"" + kind + "\"");
  }
  if (!f.has("value")) fail(f.child("value"), "required");
  f.get("value", e.value);
  f.finish();
  return e;
}

Obstacle obstacle_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  Obstacle o;
  f.get("center", o.center);
  f.get("radius", o.radius);
  f.get("weight", o.weight);
  if (!(o.radius > 0.0)) fail(f.child("radius"), "must be > 0");
  if (f.has("schedule")) {
    const Json& s = f.raw("schedule");
    if (!s.is_array()) fail(f.child("schedule"), "expected an array");
    for (size_t i = 0; i < s.size(); ++i) {
      o.schedule.push_back(event_from_json(s[i], f.child("schedule") + "[" + std::to_string(i) + "]"));
    }
    std::stable_sort(o.schedule.begin(), o.schedule.end(),
                     [](const ObstacleEvent& a, const ObstacleEvent& b) { return a.time < b.time; });
  }
  f.finish();
  return o;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

Fields::Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) fail(path_, "expected an object");
}

void Fields::touch(const std::string& key) const {
  if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) seen_.push_back(key);
}

bool Fields::has(const std::string& key) const {
  touch(key);
  return j_.contains(key);
}

const Json& Fields::raw(const std::string& key) const {
  touch(key);
  if (!j_.contains(key)) fail(child(key), "required");
  return j_.at(key);
}

void Fields::get(const std::string& key, double& out) const {
  if (has(key)) out = number(j_.at(key), child(key));
}

void Fields::get(const std::string& key, int& out) const {
  if (!has(key)) return;
  const Json& v = j_.at(key);
  if (!v.is_number_integer()) fail(child(key), "expected an integer");
  out = v.get<int>();
}

void Fields::get(const std::string& key, std::uint64_t& out) const {
  if (!has(key)) return;
  const Json& v = j_.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(child(key), "expected a non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

void Fields::get(const std::string& key, bool& out) const {
  if (!has(key)) return;
  const Json& v = j_.at(key);
  if (!v.is_boolean()) fail(child(key), "expected true or false");
  out = v.get<bool>();
}

void Fields::get(const std::string& key, std::string& out) const {
  if (!has(key)) return;
  const Json& v = j_.at(key);
  if (!v.is_string()) fail(child(key), "expected a string");
  out = v.get<std::string>();
}

void Fields::get(const std::string& key, Vector& out, int expected_size) const {
  if (has(key)) out = vector_from_json(j_.at(key), child(key), expected_size);
}

void Fields::get(const std::string& key, Eigen::Vector2d& out) const {
  if (has(key)) out = vector_from_json(j_.at(key), child(key), 2);
}

void Fields::get(const std::string& key, Eigen::Vector3d& out) const {
  if (has(key)) out = vector_from_json(j_.at(key), child(key), 3);
}

void Fields::get(const std::string& key, Matrix& out, int rows, int cols) const {
  if (has(key)) out = matrix_from_json(j_.at(key), child(key), rows, cols);
}

void Fields::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
      fail(child(it.key()), "unknown field");
    }
  }
}

Vector vector_from_json(const Json& j, const std::string& path, int expected_size) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  if (expected_size >= 0 && static_cast<int>(j.size()) != expected_size) {
    fail(path, "expected " + std::to_string(expected_size) + " entries, got " +
                   std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array()) fail(path, "expected an array");
  Matrix m(rows, cols);
  const bool nested = !j.empty() && j[0].is_array();
  if (nested) {
    if (static_cast<int>(j.size()) != rows) {
      fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    }
    for (int r = 0; r < rows; ++r) {
      m.row(r) = vector_from_json(j[static_cast<size_t>(r)], path + "[" + std::to_string(r) + "]", cols)
                     .transpose();
    }
  } else {
    const Vector flat = vector_from_json(j, path, rows * cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
    }
  }
  return m;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Json to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

LtiProblem lti_problem_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  int n = 0, m = 0;
  f.get("n", n);
  f.get("m", m);
  if (!f.has("n")) fail(f.child("n"), "required");
  if (!f.has("m")) fail(f.child("m"), "required");
  if (n < 1) fail(f.child("n"), "must be >= 1");
  if (m < 1) fail(f.child("m"), "must be >= 1");
  LtiProblem p;
  for (const char* k : {"A", "B", "Q", "R", "Qf"}) {
    if (!f.has(k)) fail(f.child(k), "required");
  }
  f.get("A", p.A, n, n);
  f.get("B", p.B, n, m);
  f.get("Q", p.Q, n, n);
  f.get("R", p.R, m, m);
  f.get("Qf", p.Qf, n, n);
  f.get("t_min", p.t_min);
  f.get("t_max", p.t_max);
  f.get("c_t", p.c_t);
  f.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return p;
}

Json to_json(const LtiProblem& p) {
  return {{"n", p.state_dim()}, {"m", p.control_dim()}, {"A", to_json(p.A)},
          {"B", to_json(p.B)},  {"Q", to_json(p.Q)},    {"R", to_json(p.R)},
          {"Qf", to_json(p.Qf)}, {"t_min", p.t_min},    {"t_max", p.t_max},
          {"c_t", p.c_t}};
}

SolverConfig solver_config_from_json(const Json& j, const std::string& path, SolverConfig c) {
  Fields f(j, path);
  f.get("window", c.window);
  f.get("t_min", c.t_min);
  f.get("t_max", c.t_max);
  f.get("alpha_init", c.alpha_init);
  f.get("alpha_backtrack", c.alpha_backtrack);
  f.get("alpha_min", c.alpha_min);
  if (f.has("trust_radius")) {
    const Json& t = f.raw("trust_radius");
    if (t.is_null()) {
      c.trust_radius.reset();
    } else {
      c.trust_radius = number(t, f.child("trust_radius"));
    }
  }
  f.get("gamma_init", c.gamma_init);
  f.get("gamma_min", c.gamma_min);
  f.get("gamma_max", c.gamma_max);
  f.get("gamma_growth", c.gamma_growth);
  f.get("gamma_shrink", c.gamma_shrink);
  f.get("max_iterations", c.max_iterations);
  f.get("convergence_tol", c.convergence_tol);
  f.get("gain_tol", c.gain_tol);
  if (f.has("mode")) {
    std::string mode;
    f.get("mode", mode);
    if (mode == "ilqr") {
      c.second_order = false;
    } else if (mode == "ddp") {
      c.second_order = true;
    } else {
      fail(f.child("mode"), "expected \"ilqr\" or \"ddp\", got \"" + mode + "\"");
    }
  }
  f.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    // SolverConfig messages start with "SolverConfig.<field>"
    std::string msg = e.what();
    const std::string prefix = "SolverConfig.";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    throw ConfigError(path + "." + msg);
  }
  return c;
}

Json to_json(const SolverConfig& c) {
  Json j = {{"window", c.window},
            {"t_min", c.t_min},
            {"t_max", c.t_max},
            {"alpha_init", c.alpha_init},
            {"alpha_backtrack", c.alpha_backtrack},
            {"alpha_min", c.alpha_min},
            {"trust_radius", nullptr},
            {"gamma_init", c.gamma_init},
            {"gamma_min", c.gamma_min},
            {"gamma_max", c.gamma_max},
            {"gamma_growth", c.gamma_growth},
            {"gamma_shrink", c.gamma_shrink},
            {"max_iterations", c.max_iterations},
            {"convergence_tol", c.convergence_tol},
            {"gain_tol", c.gain_tol},
            {"mode", c.second_order ? "ddp" : "ilqr"}};
  if (c.trust_radius) j["trust_radius"] = *c.trust_radius;
  return j;
}

DoubleIntegratorParams double_integrator_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  DoubleIntegratorParams p;
  f.has("type");
  f.get("dt", p.dt);
  f.get("q", p.q);
  f.get("r", p.r);
  f.get("qf", p.qf);
  f.get("c_t", p.c_t);
  f.get("t_min", p.t_min);
  f.get("t_max", p.t_max);
  f.finish();
  return p;
}

CartpoleParams cartpole_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  CartpoleParams p;
  f.has("type");
  f.get("cart_mass", p.cart_mass);
  f.get("pole_mass", p.pole_mass);
  f.get("pole_length", p.pole_length);
  f.get("gravity", p.gravity);
  f.get("dt", p.dt);
  f.get("w_cart_velocity", p.w_cart_velocity);
  f.get("w_pole_velocity", p.w_pole_velocity);
  f.get("w_control", p.w_control);
  f.get("w_terminal_angle", p.w_terminal_angle);
  f.get("w_terminal_velocity", p.w_terminal_velocity);
  f.get("c_t", p.c_t);
  f.finish();
  return p;
}

QuadrotorParams quadrotor_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  QuadrotorParams p;
  f.has("type");
  f.get("mass", p.mass);
  f.get("inertia", p.inertia);
  f.get("gravity", p.gravity);
  f.get("dt", p.dt);
  f.get("goal", p.goal, 12);
  f.get("q", p.q, 12);
  f.get("r", p.r, 4);
  f.get("qf", p.qf, 12);
  f.get("c_t", p.c_t);
  f.finish();
  return p;
}

PointMassNavParams point_mass_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  PointMassNavParams p;
  f.has("type");
  f.get("dt", p.dt);
  f.get("goal", p.goal);
  f.get("w_control", p.w_control);
  f.get("w_terminal_position", p.w_terminal_position);
  f.get("w_terminal_velocity", p.w_terminal_velocity);
  f.get("c_t", p.c_t);
  if (f.has("obstacles")) {
    const Json& obs = f.raw("obstacles");
    if (!obs.is_array()) fail(f.child("obstacles"), "expected an array");
    for (size_t i = 0; i < obs.size(); ++i) {
      p.obstacles.push_back(
          obstacle_from_json(obs[i], f.child("obstacles") + "[" + std::to_string(i) + "]"));
    }
  }
  f.finish();
  return p;
}

Json to_json(const DoubleIntegratorParams& p) {
  return {{"type", "double_integrator"}, {"dt", p.dt}, {"q", p.q}, {"r", p.r},
          {"qf", p.qf}, {"c_t", p.c_t}, {"t_min", p.t_min}, {"t_max", p.t_max}};
}

Json to_json(const CartpoleParams& p) {
  return {{"type", "cartpole"},
          {"cart_mass", p.cart_mass},
          {"pole_mass", p.pole_mass},
          {"pole_length", p.pole_length},
          {"gravity", p.gravity},
          {"dt", p.dt},
          {"w_cart_velocity", p.w_cart_velocity},
          {"w_pole_velocity", p.w_pole_velocity},
          {"w_control", p.w_control},
          {"w_terminal_angle", p.w_terminal_angle},
          {"w_terminal_velocity", p.w_terminal_velocity},
          {"c_t", p.c_t}};
}

Json to_json(const QuadrotorParams& p) {
  return {{"type", "quadrotor"},
          {"mass", p.mass},
          {"inertia", to_json(Vector(p.inertia))},
          {"gravity", p.gravity},
          {"dt", p.dt},
          {"goal", to_json(p.goal)},
          {"q", to_json(p.q)},
          {"r", to_json(p.r)},
          {"qf", to_json(p.qf)},
          {"c_t", p.c_t}};
}

Json to_json(const PointMassNavParams& p) {
  Json obs = Json::array();
  for (const auto& o : p.obstacles) {
    Json sched = Json::array();
    for (const auto& e : o.schedule) {
      sched.push_back({{"time", e.time},
                       {"kind", e.kind == ObstacleEvent::Kind::kVelocity ? "velocity" : "teleport"},
                       {"value", to_json(Vector(e.value))}});
    }
    obs.push_back({{"center", to_json(Vector(o.center))},
                   {"radius", o.radius},
                   {"weight", o.weight},
                   {"schedule", sched}});
  }
  return {{"type", "point_mass"},
          {"dt", p.dt},
          {"goal", to_json(Vector(p.goal))},
          {"w_control", p.w_control},
          {"w_terminal_position", p.w_terminal_position},
          {"w_terminal_velocity", p.w_terminal_velocity},
          {"c_t", p.c_t},
          {"obstacles", obs}};
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, double dt) {
  auto out = open_out(path);
  const auto n = traj.states.front().size();
  const auto m = traj.controls.empty() ? 0 : traj.controls.front().size();
  out << "t";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << "\n";
  for (size_t t = 0; t < traj.states.size(); ++t) {
    out << static_cast<double>(t) * dt;
    for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.states[t][i];
    for (Eigen::Index i = 0; i < m; ++i) {
      out << ",";
      if (t < traj.controls.size()) out << traj.controls[t][i];
    }
    out << "\n";
  }
}

void write_trace_csv(const std::string& path, const SolverResult& result) {
  auto out = open_out(path);
  out << "iteration,previous_horizon,horizon,cost,alpha,gamma,window\n";
  for (const auto& r : result.trace) {
    out << r.iteration << "," << r.previous_horizon << "," << r.horizon << "," << r.cost << ","
        << r.alpha << "," << r.gamma << "," << r.window << "\n";
  }
}

void write_horizon_table_csv(const std::string& path, const HorizonSweepResult& sweep) {
  auto out = open_out(path);
  out << "T,J,iterations,converged\n";
  for (const auto& r : sweep.records) {
    out << r.horizon << "," << r.cost << "," << r.iterations << "," << (r.converged ? 1 : 0)
        << "\n";
  }
}

void write_episode_csv(const std::string& path, const EpisodeLog& log) {
  auto out = open_out(path);
  const auto n = log.final_state.size();
  const auto m = log.steps.empty() ? 0 : log.steps.front().action.size();
  out << "step,sim_time,planned_horizon,solve_seconds,iterations,running_cost,degraded";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < m; ++i) out << ",u" << i;
  out << "\n";
  for (const auto& s : log.steps) {
    out << s.step << "," << s.sim_time << "," << s.planned_horizon << "," << s.solve_seconds << ","
        << s.iterations << "," << s.running_cost << "," << (s.degraded ? 1 : 0);
    for (Eigen::Index i = 0; i < n; ++i) out << "," << s.state[i];
    for (Eigen::Index i = 0; i < m; ++i) out << "," << s.action[i];
    out << "\n";
  }
}

Json to_json(const EpisodeLog& log) {
  Json steps = Json::array();
  for (const auto& s : log.steps) {
    steps.push_back({{"step", s.step},
                     {"sim_time", s.sim_time},
                     {"state", to_json(s.state)},
                     {"planned_horizon", s.planned_horizon},
                     {"action", to_json(s.action)},
                     {"solve_seconds", s.solve_seconds},
                     {"iterations", s.iterations},
                     {"running_cost", s.running_cost},
                     {"degraded", s.degraded}});
  }
  return {{"mode", to_string(log.mode)},
          {"steps", steps},
          {"final_state", to_json(log.final_state)},
          {"terminal_cost", log.terminal_cost},
          {"total_cost", log.total_cost},
          {"steps_used", log.steps_used},
          {"terminated", log.terminated},
          {"initial_solve_seconds", log.initial_solve_seconds},
          {"initial_horizon", log.initial_horizon}};
}

Json to_json(const CandidateEvaluation& c) {
  return {{"horizon", c.horizon},        {"t0", c.t0},
          {"predicted_cost", c.predicted_cost}, {"distance", c.distance},
          {"admissible", c.admissible}};
}

Json summary_json(const SolverResult& result) {
  Json cands = Json::array();
  if (!result.trace.empty()) {
    for (const auto& c : result.trace.back().candidates) cands.push_back(to_json(c));
  }
  return {{"horizon", result.horizon},
          {"cost", result.cost},
          {"iterations", result.iterations},
          {"backward_sweeps", result.backward_sweeps},
          {"status", to_string(result.status)},
          {"converged", result.converged()},
          {"max_feedforward", result.max_feedforward},
          {"last_candidates", cands}};
}

}  // namespace ohddp::io
