// Copyright 2026 The bisf Authors. All Rights Reserved.
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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bisf/experiments.hpp"

namespace bisf {

/// Everything a config file can hold. Every key is optional; unknown keys
/// are rejected.
struct AppConfig {
  ExperimentConfig experiment;
  /// Points where `reconstruct` evaluates the field. When absent, the
  /// validation ball of the experiment config is sampled.
  std::optional<std::vector<Point3>> query_points;
};

/// Throws ConfigError naming the offending key.
AppConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const AppConfig& config);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace bisf
