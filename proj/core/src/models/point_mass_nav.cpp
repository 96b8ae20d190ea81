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

#include "ohddp/models/point_mass_nav.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ohddp {
namespace {

// Center and in-effect velocity after following the schedule up to sim_time.
std::pair<Eigen::Vector2d, Eigen::Vector2d> follow(const Obstacle& o, double sim_time) {
  Eigen::Vector2d c = o.center;
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  double t = 0.0;
  for (const auto& ev : o.schedule) {
    if (ev.time > sim_time) break;
    const double te = std::max(ev.time, 0.0);
    c += v * (te - t);
    t = te;
    if (ev.kind == ObstacleEvent::Kind::kVelocity) {
      v = ev.value;
    } else {
      c = ev.value;
    }
  }
  c += v * (sim_time - t);
  return {c, v};
}

}  // namespace

double Obstacle::cost(const Eigen::Vector2d& p) const {
  return weight * std::exp(-(p - center).squaredNorm() / (2.0 * radius * radius));
}

Eigen::Vector2d Obstacle::center_at(double sim_time) const { return follow(*this, sim_time).first; }

PointMassNavModel::PointMassNavModel(PointMassNavParams params) : params_(std::move(params)) {
  if (!(params_.dt > 0.0)) throw std::invalid_argument("PointMassNavModel: dt must be > 0");
  if (!(params_.w_control > 0.0)) {
    throw std::invalid_argument("PointMassNavModel: w_control must be > 0");
  }
  for (auto& o : params_.obstacles) {
    if (!(o.radius > 0.0)) throw std::invalid_argument("PointMassNavModel: obstacle radius <= 0");
    std::stable_sort(o.schedule.begin(), o.schedule.end(),
                     [](const ObstacleEvent& a, const ObstacleEvent& b) { return a.time < b.time; });
  }
}

PointMassNavModel PointMassNavModel::advanced(double sim_time) const {
  if (sim_time < 0.0) throw std::invalid_argument("advanced: sim_time must be >= 0");
  PointMassNavParams p = params_;
  for (auto& o : p.obstacles) {
    const auto [c, v] = follow(o, sim_time);
    std::vector<ObstacleEvent> rest;
    if (v.squaredNorm() > 0.0) rest.push_back({0.0, ObstacleEvent::Kind::kVelocity, v});
    for (const auto& ev : o.schedule) {
      if (ev.time > sim_time) rest.push_back({ev.time - sim_time, ev.kind, ev.value});
    }
    o.center = c;
    o.schedule = std::move(rest);
  }
  return PointMassNavModel(std::move(p));
}

PointMassNavModel PointMassNavModel::snapshot() const {
  PointMassNavParams p = params_;
  for (auto& o : p.obstacles) o.schedule.clear();
  return PointMassNavModel(std::move(p));
}

double PointMassNavModel::goal_distance(const Vector& x) const {
  return (x.head<2>() - params_.goal).norm();
}

Vector PointMassNavModel::step(const Vector& x, const Vector& u) const {
  require_finite("PointMassNavModel::step", x, u);
  const double h = params_.dt;
  Vector next(4);
  next.head<2>() = x.head<2>() + h * x.tail<2>() + 0.5 * h * h * u;
  next.tail<2>() = x.tail<2>() + h * u;
  return next;
}

std::optional<Vector> PointMassNavModel::inverse_step(const Vector& x_next,
                                                      const Vector& u) const {
  const double h = params_.dt;
  Vector x(4);
  x.tail<2>() = x_next.tail<2>() - h * u;
  x.head<2>() = x_next.head<2>() - h * x.tail<2>() - 0.5 * h * h * u;
  return x;
}

double PointMassNavModel::running_cost(const Vector& x, const Vector& u) const {
  const Eigen::Vector2d p = x.head<2>();
  double c = 0.5 * params_.w_control * u.squaredNorm() + params_.c_t;
  for (const auto& o : params_.obstacles) c += o.cost(p);
  return c;
}

double PointMassNavModel::terminal_cost(const Vector& x) const {
  return 0.5 * (params_.w_terminal_position * (x.head<2>() - params_.goal).squaredNorm() +
                params_.w_terminal_velocity * x.tail<2>().squaredNorm());
}

std::optional<DynamicsJacobians> PointMassNavModel::step_jacobians(const Vector&,
                                                                   const Vector&) const {
  const double h = params_.dt;
  DynamicsJacobians J{Matrix::Identity(4, 4), Matrix::Zero(4, 2)};
  J.f_x(0, 2) = J.f_x(1, 3) = h;
  J.f_u(0, 0) = J.f_u(1, 1) = 0.5 * h * h;
  J.f_u(2, 0) = J.f_u(3, 1) = h;
  return J;
}

std::optional<CostExpansion> PointMassNavModel::running_cost_expansion(const Vector& x,
                                                                       const Vector& u) const {
  CostExpansion e;
  e.l = running_cost(x, u);
  e.l_x = Vector::Zero(4);
  e.l_xx = Matrix::Zero(4, 4);
  const Eigen::Vector2d p = x.head<2>();
  for (const auto& o : params_.obstacles) {
    const Eigen::Vector2d d = p - o.center;
    const double r2 = o.radius * o.radius;
    const double c = o.cost(p);
    e.l_x.head<2>() += -c / r2 * d;
    e.l_xx.topLeftCorner<2, 2>() +=
        c * (d * d.transpose() / (r2 * r2) - Eigen::Matrix2d::Identity() / r2);
  }
  e.l_u = params_.w_control * u;
  e.l_uu = params_.w_control * Matrix::Identity(2, 2);
  e.l_ux = Matrix::Zero(2, 4);
  return e;
}

std::optional<TerminalExpansion> PointMassNavModel::terminal_cost_expansion(
    const Vector& x) const {
  TerminalExpansion e;
  e.phi = terminal_cost(x);
  e.phi_x = Vector(4);
  e.phi_x.head<2>() = params_.w_terminal_position * (x.head<2>() - params_.goal);
  e.phi_x.tail<2>() = params_.w_terminal_velocity * x.tail<2>();
  e.phi_xx = Matrix::Zero(4, 4);
  e.phi_xx(0, 0) = e.phi_xx(1, 1) = params_.w_terminal_position;
  e.phi_xx(2, 2) = e.phi_xx(3, 3) = params_.w_terminal_velocity;
  return e;
}

PointMassNavModel obstacle_schedule_advance(const PointMassNavModel& model, double sim_time) {
  return model.advanced(sim_time);
}

}  // namespace ohddp
