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
#include <span>
#include <string>
#include <vector>

#include "bisf/bayes.hpp"
#include "bisf/experiments.hpp"
#include "bisf/geometry.hpp"
#include "bisf/hyperopt.hpp"
#include "bisf/ism.hpp"

namespace bisf::io {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a full token; throws IoError naming `context`.
double parse_double(const std::string& token, const std::string& context);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// One `x y z nx ny nz` record per line; '#' starts a comment.
std::string format_boundary_cloud(const BoundaryCloud& cloud);
BoundaryCloud parse_boundary_cloud(const std::string& text);
void write_boundary_cloud(const std::filesystem::path& path, const BoundaryCloud& cloud);
BoundaryCloud read_boundary_cloud(const std::filesystem::path& path);

/// One `x y z` record per line.
std::string format_points(std::span<const Point3> points);
std::vector<Point3> parse_points(const std::string& text);
void write_points(const std::filesystem::path& path, std::span<const Point3> points);
std::vector<Point3> read_points(const std::filesystem::path& path);

/// Snapshot file: '#'-prefixed header records (frequency, sound speed,
/// noise variance, seed, room, max order) followed by rows
/// `x y z re_clean im_clean re_noisy im_noisy`.
struct SnapshotFile {
  SimSnapshot snapshot;
  std::vector<Point3> positions;
  RoomSpec room;
  int max_order = kDefaultMaxOrder;
};
std::string format_snapshot(const SnapshotFile& file);
SnapshotFile parse_snapshot(const std::string& text);
void write_snapshot(const std::filesystem::path& path, const SnapshotFile& file);
SnapshotFile read_snapshot(const std::filesystem::path& path);

/// `sweep,method,value,run,nmse_linear,nmse_db,seconds`
std::string runs_csv(const SweepOutput& sweep);
/// `sweep,method,value,runs,failed,nmse_linear,nmse_db,nmse_stderr`.
/// Contains no timings, so identical inputs give identical bytes.
std::string aggregate_csv(const SweepOutput& sweep);
/// `iter,J,a,b,d,re_eta,im_eta`, one row per accepted point.
std::string optimizer_trace_csv(const MinimizeResult& result);

/// Rows `x y z re_mean im_mean std`.
std::string format_reconstruction(std::span<const Point3> points, const Prediction& prediction);
/// Key-value text with the fitted theta and the mapped hyperparameters.
std::string format_theta(const ThetaVector& theta, double objective, MinimizeStatus status);

}  // namespace bisf::io
