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

#include "ohddp/lti.hpp"

#include <cmath>
#include <sstream>

namespace ohddp {
namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kMinRcond = 1e-14;

bool is_symmetric(const Matrix& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return max_abs_diff(m, m.transpose()) <= kSymmetryTol * scale;
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument("LtiProblem: " + message);
}

// Factorizes R + B'PB. Throws IllPosedStep when it is numerically singular.
Eigen::LDLT<Matrix> factor_control_hessian(const Matrix& P_next, const LtiProblem& p) {
  const Matrix S = symmetrize(p.R + p.B.transpose() * P_next * p.B);
  Eigen::LDLT<Matrix> ldlt(S);
  const double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
  if (!(rcond > kMinRcond)) {
    std::ostringstream os;
    os << "ill-posed step: R + B'PB is singular (rcond = " << rcond << ")";
    throw IllPosedStep(os.str(), rcond);
  }
  return ldlt;
}

}  // namespace

void LtiProblem::validate() const {
  const auto n = A.rows();
  require(A.cols() == n && n > 0, "A must be square and non-empty");
  require(B.rows() == n && B.cols() > 0, "B must have as many rows as A");
  const auto m = B.cols();
  require(Q.rows() == n && Q.cols() == n, "Q must be n x n");
  require(Qf.rows() == n && Qf.cols() == n, "Qf must be n x n");
  require(R.rows() == m && R.cols() == m, "R must be m x m");
  require(is_symmetric(Q) && min_eigenvalue(Q) >= -1e-10, "Q must be symmetric PSD");
  require(is_symmetric(Qf) && min_eigenvalue(Qf) >= -1e-10, "Qf must be symmetric PSD");
  require(is_symmetric(R) && min_eigenvalue(R) > 0.0, "R must be symmetric PD");
  require(t_min >= 1 && t_min <= t_max, "horizon bounds must satisfy 1 <= t_min <= t_max");
  require(std::isfinite(c_t) && c_t >= 0.0, "c_t must be finite and non-negative");
}

Matrix riccati_step(const Matrix& P_next, const LtiProblem& p) {
  const auto ldlt = factor_control_hessian(P_next, p);
  const Matrix BtPA = p.B.transpose() * P_next * p.A;
  const Matrix P = p.A.transpose() * P_next * p.A - BtPA.transpose() * ldlt.solve(BtPA) + p.Q;
  return symmetrize(P);
}

Matrix lqr_gain(const Matrix& P_next, const LtiProblem& p) {
  const auto ldlt = factor_control_hessian(P_next, p);
  return -ldlt.solve(p.B.transpose() * P_next * p.A);
}

RiccatiSequence riccati_sweep(const LtiProblem& problem) {
  return riccati_sweep(problem, problem.t_max);
}

RiccatiSequence riccati_sweep(const LtiProblem& problem, int steps) {
  problem.validate();
  if (steps < 0) throw std::invalid_argument("riccati_sweep: steps must be >= 0");
  RiccatiSequence seq;
  seq.P.reserve(static_cast<size_t>(steps) + 1);
  seq.P.push_back(problem.Qf);
  for (int s = 1; s <= steps; ++s) {
    try {
      seq.P.push_back(riccati_step(seq.P.back(), problem));
    } catch (const IllPosedStep& e) {
      throw IllPosedStep(std::string(e.what()) + " at steps-to-go " + std::to_string(s),
                         e.rcond(), s);
    }
  }
  return seq;
}

LtiProblem augment_time_penalty(const LtiProblem& problem, double c_t) {
  if (c_t < 0.0) throw std::invalid_argument("augment_time_penalty: c_t must be >= 0");
  const auto n = problem.state_dim();
  const auto m = problem.control_dim();
  LtiProblem out;
  out.A = Matrix::Zero(n + 1, n + 1);
  out.A.topLeftCorner(n, n) = problem.A;
  out.A(n, n) = 1.0;
  out.B = Matrix::Zero(n + 1, m);
  out.B.topRows(n) = problem.B;
  out.Q = Matrix::Zero(n + 1, n + 1);
  out.Q.topLeftCorner(n, n) = problem.Q;
  out.Q(n, n) = 2.0 * c_t;
  out.Qf = Matrix::Zero(n + 1, n + 1);
  out.Qf.topLeftCorner(n, n) = problem.Qf;
  out.R = problem.R;
  out.t_min = problem.t_min;
  out.t_max = problem.t_max;
  out.c_t = 0.0;
  return out;
}

LtiHorizonResult lti_optimal_horizon(const LtiProblem& sweep_problem,
                                     const RiccatiSequence& seq, const Vector& x0) {
  if (x0.size() != sweep_problem.state_dim()) {
    throw std::invalid_argument("lti_optimal_horizon: x0 has wrong dimension");
  }
  if (seq.max_steps() < sweep_problem.t_max) {
    throw std::invalid_argument("lti_optimal_horizon: Riccati sequence is too short");
  }
  LtiHorizonResult result;
  result.curve.reserve(static_cast<size_t>(sweep_problem.t_max - sweep_problem.t_min + 1));
  for (int T = sweep_problem.t_min; T <= sweep_problem.t_max; ++T) {
    const double J = 0.5 * x0.dot(seq.steps_to_go(T) * x0);
    result.curve.push_back({T, J});
    // strict comparison keeps the smaller horizon on ties
    if (result.curve.size() == 1 || J < result.best_cost) {
      result.best_cost = J;
      result.best_horizon = T;
    }
  }
  return result;
}

LtiHorizonResult lti_optimal_horizon(const LtiProblem& problem, const Vector& x0) {
  if (problem.c_t > 0.0) {
    const LtiProblem aug = augment_time_penalty(problem, problem.c_t);
    Vector x0_aug(x0.size() + 1);
    x0_aug << x0, 1.0;
    return lti_optimal_horizon(aug, riccati_sweep(aug), x0_aug);
  }
  return lti_optimal_horizon(problem, riccati_sweep(problem), x0);
}

double lqr_rollout_cost(const LtiProblem& problem, const Vector& x0, int horizon) {
  const RiccatiSequence seq = riccati_sweep(problem, horizon);
  Vector x = x0;
  double cost = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const Matrix K = lqr_gain(seq.steps_to_go(horizon - t - 1), problem);
    const Vector u = K * x;
    cost += 0.5 * (x.dot(problem.Q * x) + u.dot(problem.R * u)) + problem.c_t;
    x = problem.A * x + problem.B * u;
  }
  return cost + 0.5 * x.dot(problem.Qf * x);
}

}  // namespace ohddp
