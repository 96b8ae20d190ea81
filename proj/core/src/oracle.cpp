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

#include "ohddp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ohddp/trajectory.hpp"

namespace ohddp {

FixedHorizonRecord fixed_horizon_ddp(const SystemModel& model, const Vector& x0, int horizon,
                                     const SolverConfig& cfg) {
  if (horizon < 1) throw std::invalid_argument("fixed_horizon_ddp: horizon must be >= 1");
  SolverConfig fixed = cfg;
  fixed.window = 0;
  fixed.t_min = fixed.t_max = horizon;
  FixedHorizonRecord rec;
  rec.horizon = horizon;
  try {
    SolverResult r = optimize_trajectory(model, default_initial_trajectory(model, x0, horizon), fixed);
    rec.cost = r.cost;
    rec.iterations = r.iterations;
    rec.converged = r.converged();
    rec.trajectory = std::move(r.trajectory);
  } catch (const SolverFailure&) {
    rec.converged = false;
    rec.cost = std::numeric_limits<double>::infinity();
  }
  return rec;
}

HorizonSweepResult exhaustive_horizon(const SystemModel& model, const Vector& x0, int t_lo,
                                      int t_hi, const SolverConfig& cfg, int threads) {
  if (t_lo < 1 || t_lo > t_hi) throw std::invalid_argument("exhaustive_horizon: empty range");
  HorizonSweepResult out;
  out.records.resize(static_cast<size_t>(t_hi - t_lo + 1));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < static_cast<int>(out.records.size()); i = next++) {
      out.records[static_cast<size_t>(i)] = fixed_horizon_ddp(model, x0, t_lo + i, cfg);
    }
  };
  const int n_threads = std::max(1, std::min(threads, static_cast<int>(out.records.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  bool any = false;
  for (const auto& r : out.records) {
    if (!r.converged) continue;
    if (!any || r.cost < out.best_cost) {
      out.best_cost = r.cost;
      out.best_horizon = r.horizon;
      any = true;
    }
  }
  if (!any) throw SolverFailure("exhaustive_horizon: no horizon converged");
  return out;
}

GridValueFunction::GridValueFunction(int dim, const ValueGridSpec& spec, std::vector<double> values)
    : dim_(dim), spec_(spec), values_(std::move(values)) {}

double GridValueFunction::operator()(const Vector& x) const {
  const double h = 2.0 * spec_.half_width / (spec_.points - 1);
  auto locate = [&](double c, int& i, double& w) {
    double s = (c + spec_.half_width) / h;
    s = std::clamp(s, 0.0, static_cast<double>(spec_.points - 1));
    i = std::min(static_cast<int>(s), spec_.points - 2);
    w = s - i;
  };
  int i = 0;
  double wi = 0.0;
  locate(x[0], i, wi);
  if (dim_ == 1) {
    return (1.0 - wi) * values_[static_cast<size_t>(i)] + wi * values_[static_cast<size_t>(i + 1)];
  }
  int j = 0;
  double wj = 0.0;
  locate(x[1], j, wj);
  auto at = [&](int a, int b) { return values_[static_cast<size_t>(a * spec_.points + b)]; };
  return (1.0 - wi) * ((1.0 - wj) * at(i, j) + wj * at(i, j + 1)) +
         wi * ((1.0 - wj) * at(i + 1, j) + wj * at(i + 1, j + 1));
}

std::vector<GridValueFunction> grid_value_iteration(const LtiProblem& problem,
                                                    const ValueGridSpec& spec) {
  problem.validate();
  const int n = problem.state_dim();
  if (n > 2 || problem.control_dim() != 1) {
    throw std::invalid_argument("grid_value_iteration: supports n <= 2 and m = 1 only");
  }
  if (spec.points < 2 || spec.control_points < 3) {
    throw std::invalid_argument("grid_value_iteration: grid too coarse");
  }
  const int nodes = n == 1 ? spec.points : spec.points * spec.points;
  const double h = 2.0 * spec.half_width / (spec.points - 1);
  auto node_state = [&](int idx) {
    Vector x(n);
    if (n == 1) {
      x[0] = -spec.half_width + idx * h;
    } else {
      x[0] = -spec.half_width + (idx / spec.points) * h;
      x[1] = -spec.half_width + (idx % spec.points) * h;
    }
    return x;
  };

  std::vector<GridValueFunction> out;
  std::vector<double> v(static_cast<size_t>(nodes));
  for (int k = 0; k < nodes; ++k) {
    const Vector x = node_state(k);
    v[static_cast<size_t>(k)] = 0.5 * x.dot(problem.Qf * x);
  }
  out.emplace_back(n, spec, v);

  const double du = 2.0 * spec.control_half_width / (spec.control_points - 1);
  const double r = problem.R(0, 0);
  const Vector b = problem.B.col(0);
  for (int s = 1; s <= problem.t_max; ++s) {
    const GridValueFunction& prev = out.back();
    for (int k = 0; k < nodes; ++k) {
      const Vector x = node_state(k);
      const Vector Ax = problem.A * x;
      const double lx = 0.5 * x.dot(problem.Q * x) + problem.c_t;
      auto q = [&](double u) { return 0.5 * r * u * u + prev(Ax + b * u); };
      int best = 0;
      double best_q = std::numeric_limits<double>::infinity();
      for (int c = 0; c < spec.control_points; ++c) {
        const double val = q(-spec.control_half_width + c * du);
        if (val < best_q) {
          best_q = val;
          best = c;
        }
      }
      // golden-section refinement inside the neighbouring grid cells
      double lo = -spec.control_half_width + std::max(best - 1, 0) * du;
      double hi = -spec.control_half_width + std::min(best + 1, spec.control_points - 1) * du;
      constexpr double kPhi = 0.6180339887498949;
      double a = hi - kPhi * (hi - lo), bb = lo + kPhi * (hi - lo);
      double qa = q(a), qb = q(bb);
      for (int it = 0; it < 40; ++it) {
        if (qa < qb) {
          hi = bb;
          bb = a;
          qb = qa;
          a = hi - kPhi * (hi - lo);
          qa = q(a);
        } else {
          lo = a;
          a = bb;
          qa = qb;
          bb = lo + kPhi * (hi - lo);
          qb = q(bb);
        }
      }
      v[static_cast<size_t>(k)] = lx + std::min({best_q, qa, qb});
    }
    out.emplace_back(n, spec, v);
  }
  return out;
}

}  // namespace ohddp
