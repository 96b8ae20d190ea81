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

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ohddp/derivatives.hpp"

namespace ohddp {
namespace {

constexpr double kFixedPointTol = 1e-8;
constexpr double kInverseTol = 1e-10;
constexpr int kNewtonMaxIterations = 50;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw std::invalid_argument(std::string("SolverConfig.") + field + ": " + rule);
}

bool is_fixed_point(const SystemModel& model, const Vector& x, const Vector& u) {
  const Vector next = model.step(x, u);
  return next.allFinite() && (next - x).lpNorm<Eigen::Infinity>() <= kFixedPointTol;
}

BackwardOptions backward_options(const SolverConfig& cfg, double gamma) {
  BackwardOptions o;
  o.gamma = gamma;
  o.gamma_growth = cfg.gamma_growth;
  o.gamma_max = cfg.gamma_max;
  o.second_order = cfg.second_order;
  return o;
}

}  // namespace

void SolverConfig::validate() const {
  require(window >= 0, "window", "must be >= 0");
  require(t_min >= 1, "t_min", "must be >= 1");
  require(t_min <= t_max, "t_max", "must be >= t_min");
  require(alpha_init > 0.0 && alpha_init <= 1.0, "alpha_init", "must be in (0, 1]");
  require(alpha_backtrack > 0.0 && alpha_backtrack < 1.0, "alpha_backtrack", "must be in (0, 1)");
  require(alpha_min > 0.0 && alpha_min <= alpha_init, "alpha_min", "must be in (0, alpha_init]");
  require(!trust_radius || *trust_radius > 0.0, "trust_radius", "must be > 0");
  require(gamma_init >= 0.0, "gamma_init", "must be >= 0");
  require(gamma_min >= 0.0 && gamma_min <= gamma_max, "gamma_min", "must be in [0, gamma_max]");
  require(gamma_growth > 1.0, "gamma_growth", "must be > 1");
  require(gamma_shrink >= 1.0, "gamma_shrink", "must be >= 1");
  require(max_iterations >= 1, "max_iterations", "must be >= 1");
  require(convergence_tol >= 0.0, "convergence_tol", "must be >= 0");
  require(gain_tol >= 0.0, "gain_tol", "must be >= 0");
}

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged:
      return "converged";
    case SolverStatus::kMaxIterations:
      return "max_iterations";
    case SolverStatus::kStalled:
      return "stalled";
  }
  return "unknown";
}

std::optional<Vector> solve_previous_state(const SystemModel& model, const Vector& x_next,
                                           const Vector& u, const Vector& guess) {
  if (auto x = model.inverse_step(x_next, u)) {
    if (x->allFinite() &&
        (model.step(*x, u) - x_next).lpNorm<Eigen::Infinity>() <= kInverseTol * std::max(1.0, x_next.lpNorm<Eigen::Infinity>())) {
      return x;
    }
  }
  if (!model.invertible()) return std::nullopt;

  Vector x = guess;
  Vector r = model.step(x, u) - x_next;
  double rnorm = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < kNewtonMaxIterations && std::isfinite(rnorm); ++it) {
    if (rnorm <= kInverseTol) return x;
    const auto d = expand_dynamics(model, x, u, false);
    const Vector dx = d.f_x.partialPivLu().solve(-r);
    if (!dx.allFinite()) return std::nullopt;
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
      const Vector xt = x + lambda * dx;
      const Vector rt = model.step(xt, u) - x_next;
      const double n = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(n) && n < rnorm) {
        x = xt;
        r = rt;
        rnorm = n;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (rnorm <= kInverseTol) return x;
  return std::nullopt;
}

Prefix extend_backward(const SystemModel& model, const Trajectory& traj, int S) {
  if (S < 0) throw std::invalid_argument("extend_backward: S must be >= 0");
  Prefix p;
  if (S == 0) return p;
  const Vector& x0 = traj.states.front();
  const Vector& u0 = traj.controls.front();
  const auto n = static_cast<size_t>(S);

  if (is_fixed_point(model, x0, u0)) {
    p.kind = ExtensionKind::kFixedPoint;
    p.states.assign(n, x0);
    p.controls.assign(n, u0);
    return p;
  }
  if (auto hold = model.rest_control(x0, kFixedPointTol)) {
    p.kind = ExtensionKind::kRestControl;
    p.states.assign(n, x0);
    p.controls.assign(n, *hold);
    return p;
  }
  if (model.invertible() || model.inverse_step(x0, u0)) {
    std::vector<Vector> back;  // x_{-1}, x_{-2}, ...
    back.reserve(n);
    Vector next = x0;
    bool ok = true;
    for (int s = 0; s < S; ++s) {
      auto prev = solve_previous_state(model, next, u0, next);
      if (!prev || !model.admissible(*prev)) {
        ok = false;
        break;
      }
      back.push_back(*prev);
      next = *prev;
    }
    if (ok) {
      p.kind = ExtensionKind::kInverse;
      p.states.assign(back.rbegin(), back.rend());
      p.controls.assign(n, u0);
      return p;
    }
  }
  p.kind = ExtensionKind::kInfeasible;
  p.states.assign(n, x0);
  p.controls.assign(n, u0);
  return p;
}

ExtendedTrajectory attach_prefix(const Trajectory& traj, const Prefix& prefix) {
  ExtendedTrajectory e;
  e.prefix_length = static_cast<int>(prefix.states.size());
  e.prefix_feasible = prefix.feasible();
  e.states = prefix.states;
  e.states.insert(e.states.end(), traj.states.begin(), traj.states.end());
  e.controls = prefix.controls;
  e.controls.insert(e.controls.end(), traj.controls.begin(), traj.controls.end());
  return e;
}

std::vector<CandidateEvaluation> evaluate_candidates(const BackwardResult& back,
                                                     const ExtendedTrajectory& traj,
                                                     const Vector& x0, const SolverConfig& cfg,
                                                     int window, double trust_radius) {
  const int Tbar = traj.horizon();
  window = std::min(window, traj.prefix_length);
  const int lo = std::max({cfg.t_min, Tbar - window, 1});
  const int hi = std::min(cfg.t_max, Tbar + window);
  std::vector<CandidateEvaluation> out;
  for (int T = lo; T <= hi; ++T) {
    CandidateEvaluation c;
    c.horizon = T;
    c.t0 = Tbar - T;
    const Vector dx = x0 - traj.state_at(c.t0);
    c.distance = dx.norm();
    c.predicted_cost = back.value_at(c.t0).evaluate(dx);
    const bool in_trust = c.distance == 0.0 || c.distance < trust_radius;
    c.admissible = in_trust && std::isfinite(c.predicted_cost) &&
                   (c.t0 >= 0 || traj.prefix_feasible);
    out.push_back(c);
  }
  return out;
}

std::optional<int> select_horizon(const std::vector<CandidateEvaluation>& candidates) {
  std::optional<int> best;
  double best_cost = kInf;
  for (const auto& c : candidates) {
    if (!c.admissible) continue;
    if (!best || c.predicted_cost < best_cost ||
        (c.predicted_cost == best_cost && c.horizon < *best)) {
      best = c.horizon;
      best_cost = c.predicted_cost;
    }
  }
  return best;
}

RolloutResult rollout(const SystemModel& model, const BackwardResult& back,
                      const ExtendedTrajectory& traj, int t0, double alpha, const Vector& x0) {
  const int Tbar = traj.horizon();
  if (t0 < back.first_time() || t0 >= Tbar) {
    throw std::invalid_argument("rollout: t0 outside the range covered by the gains");
  }
  RolloutResult r;
  r.trajectory.states.reserve(static_cast<size_t>(Tbar - t0 + 1));
  r.trajectory.controls.reserve(static_cast<size_t>(Tbar - t0));
  Vector x = x0;
  r.trajectory.states.push_back(x);
  for (int t = t0; t < Tbar; ++t) {
    const Vector u = traj.control_at(t) + back.policy.gain_at(t) * (x - traj.state_at(t)) +
                     alpha * back.policy.feedforward_at(t);
    if (!u.allFinite()) {
      r.cost = kInf;
      return r;
    }
    r.cost += model.running_cost(x, u);
    x = model.step(x, u);
    r.trajectory.controls.push_back(u);
    r.trajectory.states.push_back(x);
    if (!x.allFinite() || !model.admissible(x) || !std::isfinite(r.cost)) {
      r.cost = kInf;
      return r;
    }
  }
  r.cost += model.terminal_cost(x);
  if (!std::isfinite(r.cost)) r.cost = kInf;
  return r;
}

SolverResult optimize_trajectory(const SystemModel& model, const Trajectory& initial,
                                 const SolverConfig& cfg) {
  cfg.validate();
  if (initial.horizon() < cfg.t_min || initial.horizon() > cfg.t_max) {
    throw std::invalid_argument("optimize_trajectory: initial horizon outside [t_min, t_max]");
  }
  if (initial.states.size() != initial.controls.size() + 1) {
    throw std::invalid_argument("optimize_trajectory: malformed initial trajectory");
  }
  const double scale = std::max(1.0, rms_state_magnitude(initial));
  if (dynamic_residual(model, initial) > 1e-8 * scale) {
    throw std::invalid_argument("optimize_trajectory: initial trajectory is not dynamically consistent");
  }

  const Vector x0 = initial.initial_state();
  SolverResult res;
  res.trajectory = initial;
  res.horizon = initial.horizon();
  res.cost = evaluate_cost(model, initial);
  if (!std::isfinite(res.cost)) throw SolverFailure("optimize_trajectory: initial cost is not finite");

  double gamma = cfg.gamma_init;
  int window = cfg.window;
  int accepted = 0;

  auto sweep = [&](int S, double g) {
    const Prefix prefix = extend_backward(model, res.trajectory, S);
    ExtendedTrajectory ext = attach_prefix(res.trajectory, prefix);
    BackwardResult back = backward_sweep(model, ext, backward_options(cfg, g));
    ++res.backward_sweeps;
    return std::pair{std::move(ext), std::move(back)};
  };
  auto finish = [&](SolverStatus status, std::optional<BackwardResult> back) {
    res.status = status;
    res.iterations = std::max(accepted, 1);
    if (back) res.max_feedforward = back->max_feedforward(0);
    res.final_backward = std::move(back);
    return res;
  };

  for (;;) {
    auto [ext, back] = sweep(window, gamma);
    gamma = back.gamma_used;
    const double eps = cfg.trust_radius.value_or(10.0 * rms_state_magnitude(res.trajectory));

    bool stepped = false;
    for (;;) {
      const int Tbar = res.horizon;
      auto candidates = evaluate_candidates(back, ext, x0, cfg, window, eps);
      const int T_star = select_horizon(candidates).value_or(Tbar);

      if (T_star == Tbar && back.max_feedforward(0) < cfg.gain_tol) {
        return finish(SolverStatus::kConverged, std::move(back));
      }
      if (accepted >= cfg.max_iterations) {
        return finish(SolverStatus::kMaxIterations, std::move(back));
      }

      // A horizon change is only taken as a full step; the candidate costs
      // say nothing about shortened ones.
      const int t0 = Tbar - T_star;
      const double alpha_floor = T_star == Tbar ? cfg.alpha_min : cfg.alpha_init;
      for (double alpha = cfg.alpha_init; alpha >= alpha_floor * (1.0 - 1e-12);
           alpha *= cfg.alpha_backtrack) {
        RolloutResult r = rollout(model, back, ext, t0, alpha, x0);
        if (r.cost < res.cost) {
          const double rel = (res.cost - r.cost) / std::max(std::abs(res.cost), 1e-300);
          ++accepted;
          res.trace.push_back({accepted, Tbar, T_star, r.cost, alpha, gamma, window,
                               std::move(candidates)});
          res.trajectory = std::move(r.trajectory);
          res.horizon = T_star;
          res.cost = r.cost;
          gamma = std::max(gamma / cfg.gamma_shrink, cfg.gamma_min);
          window = std::min(window + 1, cfg.window);
          stepped = true;
          if (rel < cfg.convergence_tol && T_star == Tbar) {
            return finish(SolverStatus::kConverged, std::nullopt);
          }
          break;
        }
      }
      if (stepped) break;
      if (T_star != Tbar) {
        window /= 2;
        continue;
      }

      // No cost-reducing step: shrink the window and regularize harder.
      if (window == 0) {
        const double predicted = std::abs(back.expected_improvement(0, 1.0));
        if (predicted <= cfg.convergence_tol * std::max(std::abs(res.cost), 1.0)) {
          return finish(SolverStatus::kConverged, std::move(back));
        }
        if (gamma >= cfg.gamma_max) return finish(SolverStatus::kStalled, std::move(back));
      }
      window /= 2;
      gamma = std::min(std::max(gamma, 1e-12) * cfg.gamma_growth, cfg.gamma_max);
      try {
        std::tie(ext, back) = sweep(window, gamma);
      } catch (const SolverFailure&) {
        return finish(SolverStatus::kStalled, std::nullopt);
      }
      gamma = back.gamma_used;
    }
  }
}

}  // namespace ohddp
