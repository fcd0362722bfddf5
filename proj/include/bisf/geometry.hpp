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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bisf/random.hpp"
#include "bisf/types.hpp"

namespace bisf {

/// Axis-aligned shoebox room spanning [0, dimensions] with one point source.
struct RoomSpec {
  Eigen::Vector3d dimensions{5.0, 4.0, 3.0};
  double reflection_coefficient = 0.95;
  Point3 source{1.0, 2.0, 1.5};

  /// Throws std::invalid_argument when the room is degenerate, the
  /// reflection coefficient is outside [0, 1] or the source is not interior.
  void validate() const;

  Point3 center() const { return dimensions / 2.0; }
  bool contains(const Point3& p) const;
  bool strictly_contains(const Point3& p) const;
};

/// Half of the room (x > Lx/2) used for microphones.
struct Box {
  Point3 lo;
  Point3 hi;
  Point3 centroid() const { return (lo + hi) / 2.0; }
  double volume() const { return (hi - lo).prod(); }
  bool contains(const Point3& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

Box microphone_region(const RoomSpec& room);

struct BoundaryCloud {
  std::vector<Point3> points;
  std::vector<UnitVector3> normals;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void validate() const;
  /// First n samples. Boundary sampling is sequential, so prefixes of one
  /// draw are nested clouds.
  BoundaryCloud prefix(std::size_t n) const;
};

struct MicArray {
  std::vector<Point3> positions;

  std::size_t size() const { return positions.size(); }
  /// M >= 1 and pairwise distinct positions.
  void validate() const;
};

MicArray sample_microphones(const RoomSpec& room, std::size_t count,
                            const Point3& exclusion_center, double exclusion_radius,
                            std::uint64_t seed);

MicArray sample_validation_points(const RoomSpec& room, std::size_t count,
                                  const Point3& center, double radius, std::uint64_t seed);

/// Face order: -x, +x, -y, +y, -z, +z.
std::array<double, 6> face_areas(const RoomSpec& room);

BoundaryCloud sample_boundary(const RoomSpec& room, std::size_t count, std::uint64_t seed);

enum class PerturbationMode {
  kPerPoint,  // independent random direction for every point
  kShared,    // one random direction applied to all points
};

/// Displaces every point by exactly `magnitude` meters along a uniformly
/// random direction.
std::vector<Point3> perturb_positions(std::span<const Point3> points, double magnitude,
                                      std::uint64_t seed,
                                      PerturbationMode mode = PerturbationMode::kPerPoint);

/// Uniform direction on the sphere.
UnitVector3 random_direction(Rng& rng);

}  // namespace bisf
