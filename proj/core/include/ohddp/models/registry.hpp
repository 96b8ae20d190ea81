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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ohddp/model.hpp"

namespace ohddp {

/// Registered model types, sorted.
std::vector<std::string> model_names();

/// Builds a model from {"type": <name>, ...params}. The optional key
/// "inject_derivative_fault": true wraps the model so that its analytic
/// dynamics Jacobian is wrong (for exercising the derivative checker).
/// Throws io::ConfigError naming the field; an unknown type lists the valid
/// names.
ModelPtr make_model(const nlohmann::json& j, const std::string& path = "model");

/// Resolved parameters of a model built by make_model, with "type".
nlohmann::json model_to_json(const SystemModel& model);

/// Admissible (x, u) pairs drawn from a fixed-seed generator, scaled to the
/// model's typical operating range.
std::vector<std::pair<Vector, Vector>> derivative_samples(const SystemModel& model, int count,
                                                          std::uint64_t seed);

}  // namespace ohddp
