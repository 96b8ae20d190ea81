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

#include "ohddp/models/registry.hpp"

#include <random>

#include "ohddp/derivatives.hpp"
#include "ohddp/io.hpp"

namespace ohddp {
namespace {

using io::ConfigError;
using io::Json;

/// Forwards to `inner` but perturbs f_u by 1% of its scale plus 0.01.
class FaultInjectedModel final : public SystemModel {
 public:
  explicit FaultInjectedModel(ModelPtr inner) : inner_(std::move(inner)) {}

  const SystemModel& inner() const { return *inner_; }

  std::string name() const override { return inner_->name(); }
  int state_dim() const override { return inner_->state_dim(); }
  int control_dim() const override { return inner_->control_dim(); }
  double timestep() const override { return inner_->timestep(); }
  Vector step(const Vector& x, const Vector& u) const override { return inner_->step(x, u); }
  double running_cost(const Vector& x, const Vector& u) const override {
    return inner_->running_cost(x, u);
  }
  double terminal_cost(const Vector& x) const override { return inner_->terminal_cost(x); }
  std::optional<DynamicsJacobians> step_jacobians(const Vector& x,
                                                  const Vector& u) const override {
    auto d = expand_dynamics(*inner_, x, u, false);
    DynamicsJacobians j{d.f_x, d.f_u};
    j.f_u.array() += 0.01 + 0.01 * j.f_u.cwiseAbs().maxCoeff();
    return j;
  }
  std::optional<CostExpansion> running_cost_expansion(const Vector& x,
                                                      const Vector& u) const override {
    return inner_->running_cost_expansion(x, u);
  }
  std::optional<TerminalExpansion> terminal_cost_expansion(const Vector& x) const override {
    return inner_->terminal_cost_expansion(x);
  }
  Vector nominal_control() const override { return inner_->nominal_control(); }
  bool admissible(const Vector& x) const override { return inner_->admissible(x); }

 private:
  ModelPtr inner_;
};

std::string joined_names() {
  std::string out;
  for (const auto& n : model_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

std::vector<std::string> model_names() {
  return {"cartpole", "double_integrator", "linear", "point_mass", "quadrotor"};
}

ModelPtr make_model(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  if (!j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(path + ".type: required; valid models: " + joined_names());
  }
  Json params = j;
  bool fault = false;
  if (params.contains("inject_derivative_fault")) {
    if (!params.at("inject_derivative_fault").is_boolean()) {
      throw ConfigError(path + ".inject_derivative_fault: expected true or false");
    }
    fault = params.at("inject_derivative_fault").get<bool>();
    params.erase("inject_derivative_fault");
  }
  const std::string type = j.at("type").get<std::string>();
  ModelPtr model;
  try {
    if (type == "cartpole") {
      model = std::make_shared<CartpoleModel>(io::cartpole_from_json(params, path));
    } else if (type == "double_integrator") {
      model = std::make_shared<DoubleIntegratorModel>(io::double_integrator_from_json(params, path));
    } else if (type == "linear") {
      double dt = 1.0;
      if (params.contains("dt")) {
        if (!params.at("dt").is_number()) throw ConfigError(path + ".dt: expected a number");
        dt = params.at("dt").get<double>();
        params.erase("dt");
      }
      params.erase("type");
      model = std::make_shared<LinearQuadraticModel>(io::lti_problem_from_json(params, path), dt);
    } else if (type == "point_mass") {
      model = std::make_shared<PointMassNavModel>(io::point_mass_from_json(params, path));
    } else if (type == "quadrotor") {
      model = std::make_shared<QuadrotorModel>(io::quadrotor_from_json(params, path));
    } else {
      throw ConfigError(path + ".type: unknown model \"" + type + "\"; valid models: " +
                        joined_names());
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (fault) model = std::make_shared<FaultInjectedModel>(std::move(model));
  return model;
}

Json model_to_json(const SystemModel& model) {
  if (auto* f = dynamic_cast<const FaultInjectedModel*>(&model)) {
    Json j = model_to_json(f->inner());
    j["inject_derivative_fault"] = true;
    return j;
  }
  if (auto* m = dynamic_cast<const CartpoleModel*>(&model)) return io::to_json(m->params());
  if (auto* m = dynamic_cast<const DoubleIntegratorModel*>(&model)) return io::to_json(m->params());
  if (auto* m = dynamic_cast<const PointMassNavModel*>(&model)) return io::to_json(m->params());
  if (auto* m = dynamic_cast<const QuadrotorModel*>(&model)) return io::to_json(m->params());
  if (auto* m = dynamic_cast<const LinearQuadraticModel*>(&model)) {
    Json j = io::to_json(m->problem());
    j["type"] = "linear";
    j["dt"] = m->timestep();
    return j;
  }
  return {{"type", model.name()}};
}

std::vector<std::pair<Vector, Vector>> derivative_samples(const SystemModel& model, int count,
                                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = model.state_dim();
  const int m = model.control_dim();
  double x_scale = 1.0;
  double u_scale = 1.0;
  if (model.name() == "quadrotor") {
    x_scale = 0.4;
    u_scale = 0.5;
  }
  const Vector u_nom = model.nominal_control();
  std::vector<std::pair<Vector, Vector>> out;
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 1000 * count; ++tries) {
    Vector x(n), u(m);
    for (int i = 0; i < n; ++i) x[i] = x_scale * normal(rng);
    for (int i = 0; i < m; ++i) u[i] = u_nom[i] + u_scale * normal(rng);
    if (model.admissible(x)) out.emplace_back(std::move(x), std::move(u));
  }
  return out;
}

}  // namespace ohddp
