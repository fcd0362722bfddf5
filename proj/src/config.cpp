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

#include "bisf/config.hpp"

#include <fstream>
#include <set>

#include "bisf/io.hpp"

namespace bisf {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported by their full path.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where("") + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  Section child(const std::string& key) { return Section(node_.at(key), where(key)); }

  double number(const std::string& key) {
    const json& v = node_.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError(where(key) + " must be a number");
  }

  long long integer(const std::string& key) {
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    return v.get<long long>();
  }

  std::size_t count(const std::string& key) {
    const long long v = integer(key);
    if (v < 0) throw ConfigError(where(key) + " must be non-negative");
    return static_cast<std::size_t>(v);
  }

  std::string string(const std::string& key) {
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& key) {
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + " must be an array");
    return v;
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    for (const auto& e : array(key)) {
      if (!e.is_number()) throw ConfigError(where(key) + " must contain only numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) {
    std::vector<std::size_t> out;
    for (const auto& e : array(key)) {
      if (!e.is_number_integer() || e.get<long long>() < 0) {
        throw ConfigError(where(key) + " must contain non-negative integers");
      }
      out.push_back(static_cast<std::size_t>(e.get<long long>()));
    }
    return out;
  }

  Eigen::Vector3d vec3(const std::string& key) {
    const auto v = numbers(key);
    if (v.size() != 3) throw ConfigError(where(key) + " must have exactly 3 entries");
    return {v[0], v[1], v[2]};
  }

  std::vector<std::string> strings(const std::string& key) {
    std::vector<std::string> out;
    for (const auto& e : array(key)) {
      if (!e.is_string()) throw ConfigError(where(key) + " must contain only strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  /// Throws for the first key that no reader asked about.
  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      (void)value;
      if (!seen_.count(key)) throw ConfigError("unknown configuration key '" + where(key) + "'");
    }
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string mode_name(PerturbationMode m) {
  return m == PerturbationMode::kShared ? "shared" : "per_point";
}

}  // namespace

AppConfig config_from_json(const json& doc) {
  AppConfig app;
  ExperimentConfig& c = app.experiment;
  Section root(doc, "");

  if (root.has("room")) {
    Section s = root.child("room");
    if (s.has("dimensions")) c.room.dimensions = s.vec3("dimensions");
    if (s.has("reflection_coefficient")) c.room.reflection_coefficient = s.number("reflection_coefficient");
    if (s.has("source")) c.room.source = s.vec3("source");
    if (s.has("max_order")) c.max_order = static_cast<int>(s.integer("max_order"));
    s.finish();
  }
  if (root.has("sound_speed")) c.sound_speed = root.number("sound_speed");
  if (root.has("snr_db")) c.snr_db = root.number("snr_db");
  if (root.has("seed")) {
    const long long seed = root.integer("seed");
    if (seed < 0) throw ConfigError("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
  }
  if (root.has("microphones")) {
    Section s = root.child("microphones");
    if (s.has("count")) c.mic_count = s.count("count");
    s.finish();
  }
  if (root.has("validation")) {
    Section s = root.child("validation");
    if (s.has("count")) c.validation_count = s.count("count");
    if (s.has("radius")) c.validation_radius = s.number("radius");
    s.finish();
  }
  if (root.has("dictionary")) {
    Section s = root.child("dictionary");
    if (s.has("plane_waves")) c.plane_waves = s.count("plane_waves");
    s.finish();
  }
  if (root.has("operating_point")) {
    Section s = root.child("operating_point");
    if (s.has("frequency")) c.frequency = s.number("frequency");
    if (s.has("boundary_count")) c.boundary_count = s.count("boundary_count");
    s.finish();
  }
  if (root.has("sweeps")) {
    Section s = root.child("sweeps");
    if (s.has("run")) {
      c.sweeps.clear();
      for (const auto& name : s.strings("run")) {
        try {
          c.sweeps.push_back(sweep_from_string(name));
        } catch (const ConfigError& e) {
          throw ConfigError(s.where("run") + ": " + e.what());
        }
      }
    }
    if (s.has("boundary_counts")) c.boundary_counts = s.counts("boundary_counts");
    if (s.has("boundary_perturbations")) c.boundary_perturbations = s.numbers("boundary_perturbations");
    if (s.has("mic_perturbations")) c.mic_perturbations = s.numbers("mic_perturbations");
    if (s.has("frequencies")) c.frequencies = s.numbers("frequencies");
    if (s.has("perturbation_mode")) {
      const auto m = s.string("perturbation_mode");
      if (m == "per_point") {
        c.perturbation_mode = PerturbationMode::kPerPoint;
      } else if (m == "shared") {
        c.perturbation_mode = PerturbationMode::kShared;
      } else {
        throw ConfigError(s.where("perturbation_mode") + " must be 'per_point' or 'shared'");
      }
    }
    if (s.has("monte_carlo_runs")) c.monte_carlo_runs = static_cast<int>(s.integer("monte_carlo_runs"));
    s.finish();
  }
  if (root.has("methods")) {
    c.methods.clear();
    for (const auto& name : root.strings("methods")) {
      try {
        c.methods.push_back(method_from_string(name));
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("methods: ") + e.what());
      }
    }
  }
  if (root.has("optimizer")) {
    Section s = root.child("optimizer");
    if (s.has("max_line_searches")) c.optimizer.max_line_searches = static_cast<int>(s.integer("max_line_searches"));
    if (s.has("relative_tolerance")) c.optimizer.relative_tolerance = s.number("relative_tolerance");
    if (s.has("sufficient_decrease")) c.optimizer.sufficient_decrease = s.number("sufficient_decrease");
    if (s.has("curvature")) c.optimizer.curvature = s.number("curvature");
    s.finish();
  }
  if (root.has("lasso")) {
    Section s = root.child("lasso");
    if (s.has("grid_points")) c.lasso.grid_points = s.count("grid_points");
    if (s.has("grid_low_ratio")) c.lasso.grid_low_ratio = s.number("grid_low_ratio");
    if (s.has("folds")) c.lasso.folds = static_cast<int>(s.integer("folds"));
    if (s.has("fixed_lambda_ratio")) c.lasso.fixed_lambda_ratio = s.number("fixed_lambda_ratio");
    if (s.has("max_iterations")) c.lasso.max_iterations = static_cast<int>(s.integer("max_iterations"));
    if (s.has("tolerance")) c.lasso.tolerance = s.number("tolerance");
    s.finish();
  }
  if (root.has("reconstruction")) {
    Section s = root.child("reconstruction");
    if (s.has("points")) {
      std::vector<Point3> pts;
      for (const auto& e : s.array("points")) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number() || !e[1].is_number() ||
            !e[2].is_number()) {
          throw ConfigError(s.where("points") + " entries must be [x, y, z]");
        }
        pts.emplace_back(e[0].get<double>(), e[1].get<double>(), e[2].get<double>());
      }
      app.query_points = std::move(pts);
    }
    s.finish();
  }
  root.finish();
  c.validate();
  return app;
}

json config_to_json(const AppConfig& app) {
  const ExperimentConfig& c = app.experiment;
  auto vec = [](const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); };
  json j;
  j["room"] = {{"dimensions", vec(c.room.dimensions)},
               {"reflection_coefficient", c.room.reflection_coefficient},
               {"source", vec(c.room.source)},
               {"max_order", c.max_order}};
  j["sound_speed"] = c.sound_speed;
  if (std::isinf(c.snr_db)) {
    j["snr_db"] = "inf";
  } else {
    j["snr_db"] = c.snr_db;
  }
  j["seed"] = c.seed;
  j["microphones"] = {{"count", c.mic_count}};
  j["validation"] = {{"count", c.validation_count}, {"radius", c.validation_radius}};
  j["dictionary"] = {{"plane_waves", c.plane_waves}};
  j["operating_point"] = {{"frequency", c.frequency}, {"boundary_count", c.boundary_count}};
  json run = json::array();
  for (auto s : c.sweeps) run.push_back(to_string(s));
  j["sweeps"] = {{"run", run},
                 {"boundary_counts", c.boundary_counts},
                 {"boundary_perturbations", c.boundary_perturbations},
                 {"mic_perturbations", c.mic_perturbations},
                 {"frequencies", c.frequencies},
                 {"perturbation_mode", mode_name(c.perturbation_mode)},
                 {"monte_carlo_runs", c.monte_carlo_runs}};
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["optimizer"] = {{"max_line_searches", c.optimizer.max_line_searches},
                    {"relative_tolerance", c.optimizer.relative_tolerance},
                    {"sufficient_decrease", c.optimizer.sufficient_decrease},
                    {"curvature", c.optimizer.curvature}};
  j["lasso"] = {{"grid_points", c.lasso.grid_points},
                {"grid_low_ratio", c.lasso.grid_low_ratio},
                {"folds", c.lasso.folds},
                {"max_iterations", c.lasso.max_iterations},
                {"tolerance", c.lasso.tolerance}};
  if (c.lasso.fixed_lambda_ratio) j["lasso"]["fixed_lambda_ratio"] = *c.lasso.fixed_lambda_ratio;
  if (app.query_points) {
    json pts = json::array();
    for (const auto& p : *app.query_points) pts.push_back(vec(p));
    j["reconstruction"] = {{"points", pts}};
  }
  return j;
}

AppConfig load_config(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace bisf
