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

#include "ohddp/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ohddp {

void require_finite(const char* model, const Vector& x, const Vector& u) {
  if (!x.allFinite()) throw NonFiniteInput(std::string(model) + ": non-finite state");
  if (!u.allFinite()) throw NonFiniteInput(std::string(model) + ": non-finite control");
}

std::optional<Vector> SystemModel::rest_control(const Vector& x, double tol) const {
  Vector u = nominal_control();
  const Vector next = step(x, u);
  if (!next.allFinite() || (next - x).lpNorm<Eigen::Infinity>() > tol) return std::nullopt;
  return u;
}

TimePenalizedModel::TimePenalizedModel(ModelPtr base, double c_t)
    : base_(std::move(base)), c_t_(c_t) {
  if (!base_) throw std::invalid_argument("TimePenalizedModel: null base model");
  if (!(c_t_ >= 0.0) || !std::isfinite(c_t_)) {
    throw std::invalid_argument("TimePenalizedModel: c_t must be finite and >= 0");
  }
}

std::string TimePenalizedModel::name() const { return base_->name(); }

std::optional<CostExpansion> TimePenalizedModel::running_cost_expansion(const Vector& x,
                                                                        const Vector& u) const {
  auto e = base_->running_cost_expansion(x, u);
  if (e) e->l += c_t_;
  return e;
}

ModelPtr with_time_penalty(ModelPtr model, double c_t) {
  return std::make_shared<TimePenalizedModel>(std::move(model), c_t);
}

}  // namespace ohddp
