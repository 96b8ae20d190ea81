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

#include "ohddp/derivatives.hpp"

#include <functional>
#include <limits>
#include <sstream>

namespace ohddp {
namespace {

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;

std::string describe(const char* what, int index, double h) {
  std::ostringstream os;
  os << what << " is non-finite at perturbation z[" << index << "] " << (h >= 0 ? "+" : "")
     << h;
  return os.str();
}

double eval_checked(const ScalarFn& fn, const Vector& z, const char* what, int index,
                    double h) {
  const double v = fn(z);
  if (!std::isfinite(v)) throw DerivativeError(describe(what, index, h));
  return v;
}

Vector eval_checked(const VectorFn& fn, const Vector& z, const char* what, int index,
                    double h) {
  Vector v = fn(z);
  if (!v.allFinite()) throw DerivativeError(describe(what, index, h));
  return v;
}

Vector numeric_gradient(const ScalarFn& fn, const Vector& z, const char* what) {
  Vector g(z.size());
  Vector zp = z;
  for (int i = 0; i < z.size(); ++i) {
    const double h = first_difference_step(z[i]);
    zp[i] = z[i] + h;
    const double fp = eval_checked(fn, zp, what, i, h);
    zp[i] = z[i] - h;
    const double fm = eval_checked(fn, zp, what, i, -h);
    zp[i] = z[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Matrix numeric_hessian(const ScalarFn& fn, const Vector& z, const char* what) {
  const int N = static_cast<int>(z.size());
  Matrix H(N, N);
  const double f0 = eval_checked(fn, z, what, -1, 0.0);
  Vector zp = z;
  for (int i = 0; i < N; ++i) {
    const double hi = second_difference_step(z[i]);
    zp[i] = z[i] + hi;
    const double fp = eval_checked(fn, zp, what, i, hi);
    zp[i] = z[i] - hi;
    const double fm = eval_checked(fn, zp, what, i, -hi);
    zp[i] = z[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (int j = 0; j < i; ++j) {
      const double hj = second_difference_step(z[j]);
      double acc = 0.0;
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          zp[i] = z[i] + si * hi;
          zp[j] = z[j] + sj * hj;
          acc += si * sj * eval_checked(fn, zp, what, i, si * hi);
        }
      }
      zp[i] = z[i];
      zp[j] = z[j];
      H(i, j) = H(j, i) = acc / (4.0 * hi * hj);
    }
  }
  return H;
}

Matrix numeric_jacobian(const VectorFn& fn, const Vector& z, int out_dim, const char* what,
                        double (*step_rule)(double)) {
  Matrix J(out_dim, z.size());
  Vector zp = z;
  for (int i = 0; i < z.size(); ++i) {
    const double h = step_rule(z[i]);
    zp[i] = z[i] + h;
    const Vector fp = eval_checked(fn, zp, what, i, h);
    zp[i] = z[i] - h;
    const Vector fm = eval_checked(fn, zp, what, i, -h);
    zp[i] = z[i];
    J.col(i) = (fp - fm) / (2.0 * h);
  }
  return J;
}

Vector concat(const Vector& x, const Vector& u) {
  Vector z(x.size() + u.size());
  z << x, u;
  return z;
}

DynamicsJacobians jacobians(const SystemModel& model, const Vector& x, const Vector& u,
                            DerivativeSource source) {
  if (source == DerivativeSource::kAuto) {
    if (auto j = model.step_jacobians(x, u)) return *std::move(j);
  }
  const int n = model.state_dim();
  const VectorFn f = [&](const Vector& z) { return model.step(z.head(n), z.tail(z.size() - n)); };
  const Matrix J = numeric_jacobian(f, concat(x, u), n, "dynamics", first_difference_step);
  return {J.leftCols(n), J.rightCols(J.cols() - n)};
}

double relative_discrepancy(const Matrix& analytic, const Matrix& numeric) {
  const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return (analytic - numeric).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

CostExpansion expand_cost(const SystemModel& model, const Vector& x, const Vector& u,
                          DerivativeSource source) {
  if (source == DerivativeSource::kAuto) {
    if (auto e = model.running_cost_expansion(x, u)) {
      e->l_xx = symmetrize(e->l_xx);
      e->l_uu = symmetrize(e->l_uu);
      return *std::move(e);
    }
  }
  const int n = model.state_dim();
  const int m = model.control_dim();
  const ScalarFn l = [&](const Vector& z) { return model.running_cost(z.head(n), z.tail(m)); };
  const Vector z = concat(x, u);
  const Vector g = numeric_gradient(l, z, "running cost");
  const Matrix H = numeric_hessian(l, z, "running cost");
  CostExpansion e;
  e.l = eval_checked(l, z, "running cost", -1, 0.0);
  e.l_x = g.head(n);
  e.l_u = g.tail(m);
  e.l_xx = symmetrize(H.topLeftCorner(n, n));
  e.l_ux = H.bottomLeftCorner(m, n);
  e.l_uu = symmetrize(H.bottomRightCorner(m, m));
  return e;
}

TerminalExpansion expand_terminal(const SystemModel& model, const Vector& x,
                                  DerivativeSource source) {
  if (source == DerivativeSource::kAuto) {
    if (auto e = model.terminal_cost_expansion(x)) {
      e->phi_xx = symmetrize(e->phi_xx);
      return *std::move(e);
    }
  }
  const ScalarFn phi = [&](const Vector& z) { return model.terminal_cost(z); };
  TerminalExpansion e;
  e.phi = eval_checked(phi, x, "terminal cost", -1, 0.0);
  e.phi_x = numeric_gradient(phi, x, "terminal cost");
  e.phi_xx = symmetrize(numeric_hessian(phi, x, "terminal cost"));
  return e;
}

DynamicsExpansion expand_dynamics(const SystemModel& model, const Vector& x, const Vector& u,
                                  bool second_order, DerivativeSource source) {
  const int n = model.state_dim();
  const int m = model.control_dim();
  DynamicsExpansion d;
  d.f0 = model.step(x, u);
  if (!d.f0.allFinite()) throw DerivativeError("dynamics is non-finite at the nominal point");
  auto J = jacobians(model, x, u, source);
  d.f_x = std::move(J.f_x);
  d.f_u = std::move(J.f_u);
  if (!second_order) return d;

  // Differentiate the stacked Jacobian [f_x f_u] once more, column block by
  // column block, with the second-derivative step.
  const Vector z = concat(x, u);
  const int N = n + m;
  std::vector<Matrix> dJ(static_cast<size_t>(N));  // dJ[k] = d[f_x f_u]/dz_k, n x N
  Vector zp = z;
  for (int k = 0; k < N; ++k) {
    const double h = second_difference_step(z[k]);
    zp[k] = z[k] + h;
    const auto Jp = jacobians(model, zp.head(n), zp.tail(m), source);
    zp[k] = z[k] - h;
    const auto Jm = jacobians(model, zp.head(n), zp.tail(m), source);
    zp[k] = z[k];
    Matrix stacked_p(n, N), stacked_m(n, N);
    stacked_p << Jp.f_x, Jp.f_u;
    stacked_m << Jm.f_x, Jm.f_u;
    dJ[static_cast<size_t>(k)] = (stacked_p - stacked_m) / (2.0 * h);
    if (!dJ[static_cast<size_t>(k)].allFinite()) {
      throw DerivativeError(describe("dynamics Jacobian", k, h));
    }
  }
  d.f_xx.assign(static_cast<size_t>(n), Matrix(n, n));
  d.f_ux.assign(static_cast<size_t>(n), Matrix(m, n));
  d.f_uu.assign(static_cast<size_t>(n), Matrix(m, m));
  for (int i = 0; i < n; ++i) {
    auto& fxx = d.f_xx[static_cast<size_t>(i)];
    auto& fux = d.f_ux[static_cast<size_t>(i)];
    auto& fuu = d.f_uu[static_cast<size_t>(i)];
    for (int k = 0; k < N; ++k) {
      const Matrix& D = dJ[static_cast<size_t>(k)];
      if (k < n) {
        for (int j = 0; j < n; ++j) fxx(j, k) = D(i, j);
      } else {
        for (int j = 0; j < n; ++j) fux(k - n, j) = D(i, j);
        for (int a = 0; a < m; ++a) fuu(a, k - n) = D(i, n + a);
      }
    }
    fxx = symmetrize(fxx);
    fuu = symmetrize(fuu);
  }
  return d;
}

std::vector<std::string> DerivativeReport::failures() const {
  std::vector<std::string> out;
  for (const auto& e : entries) {
    if (e.analytic && !(e.max_relative <= tolerance)) out.push_back(e.quantity);
  }
  return out;
}

DerivativeReport check_derivatives(const SystemModel& model,
                                   const std::vector<std::pair<Vector, Vector>>& samples,
                                   double tolerance) {
  DerivativeReport report;
  report.tolerance = tolerance;
  const char* names[] = {"f_x", "f_u", "l_x", "l_u", "l_xx", "l_ux", "l_uu", "phi_x", "phi_xx"};
  for (const char* q : names) report.entries.push_back({q, 0.0, false});
  auto bump = [&](int idx, const Matrix& a, const Matrix& n) {
    auto& e = report.entries[static_cast<size_t>(idx)];
    e.analytic = true;
    const double r = relative_discrepancy(a, n);
    e.max_relative = std::isfinite(r) ? std::max(e.max_relative, r)
                                      : std::numeric_limits<double>::infinity();
  };
  for (const auto& [x, u] : samples) {
    if (auto J = model.step_jacobians(x, u)) {
      const auto N = jacobians(model, x, u, DerivativeSource::kNumeric);
      bump(0, J->f_x, N.f_x);
      bump(1, J->f_u, N.f_u);
    }
    if (auto c = model.running_cost_expansion(x, u)) {
      const auto N = expand_cost(model, x, u, DerivativeSource::kNumeric);
      bump(2, c->l_x, N.l_x);
      bump(3, c->l_u, N.l_u);
      bump(4, c->l_xx, N.l_xx);
      bump(5, c->l_ux, N.l_ux);
      bump(6, c->l_uu, N.l_uu);
    }
    if (auto t = model.terminal_cost_expansion(x)) {
      const auto N = expand_terminal(model, x, DerivativeSource::kNumeric);
      bump(7, t->phi_x, N.phi_x);
      bump(8, t->phi_xx, N.phi_xx);
    }
  }
  report.passed = report.failures().empty();
  return report;
}

}  // namespace ohddp
