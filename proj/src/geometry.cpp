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

#include "bisf/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bisf {

void RoomSpec::validate() const {
  if (!dimensions.allFinite() || (dimensions.array() <= 0.0).any()) {
    throw std::invalid_argument("room dimensions must be positive and finite");
  }
  if (!(reflection_coefficient >= 0.0 && reflection_coefficient <= 1.0)) {
    throw std::invalid_argument("reflection coefficient must lie in [0, 1]");
  }
  if (!strictly_contains(source)) {
    throw std::invalid_argument("source must be strictly inside the room");
  }
}

bool RoomSpec::contains(const Point3& p) const {
  return (p.array() >= 0.0).all() && (p.array() <= dimensions.array()).all();
}

bool RoomSpec::strictly_contains(const Point3& p) const {
  return p.allFinite() && (p.array() > 0.0).all() && (p.array() < dimensions.array()).all();
}

Box microphone_region(const RoomSpec& room) {
  Box box{Point3::Zero(), room.dimensions};
  box.lo.x() = room.dimensions.x() / 2.0;
  return box;
}

void BoundaryCloud::validate() const {
  if (points.size() != normals.size()) {
    throw std::invalid_argument("boundary cloud: points and normals differ in length");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw std::invalid_argument("boundary cloud: non-finite point");
    }
    if (std::abs(normals[i].vector().norm() - 1.0) > UnitVector3::kTolerance) {
      throw std::invalid_argument("boundary cloud: normal is not unit length");
    }
  }
}

BoundaryCloud BoundaryCloud::prefix(std::size_t n) const {
  n = std::min(n, points.size());
  BoundaryCloud out;
  out.points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n));
  out.normals.assign(normals.begin(), normals.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

void MicArray::validate() const {
  if (positions.empty()) {
    throw std::invalid_argument("microphone array must contain at least one position");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].allFinite()) {
      throw std::invalid_argument("microphone array: non-finite position");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (positions[i] == positions[j]) {
        throw std::invalid_argument("microphone array: duplicate position");
      }
    }
  }
}

namespace {

Point3 uniform_in_box(Rng& rng, const Box& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point3 p;
  for (int d = 0; d < 3; ++d) p[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * u(rng);
  return p;
}

// Acceptance-rate floor for rejection sampling.
constexpr double kMinAcceptance = 1e-6;

}  // namespace

MicArray sample_microphones(const RoomSpec& room, std::size_t count,
                            const Point3& exclusion_center, double exclusion_radius,
                            std::uint64_t seed) {
  room.validate();
  if (count < 1) throw std::invalid_argument("sample_microphones: count must be >= 1");
  if (!(exclusion_radius >= 0.0)) {
    throw std::invalid_argument("sample_microphones: exclusion radius must be >= 0");
  }
  const Box region = microphone_region(room);
  Rng rng(seed);
  MicArray mics;
  mics.positions.reserve(count);
  const double r2 = exclusion_radius * exclusion_radius;
  std::uint64_t attempts = 0;
  while (mics.positions.size() < count) {
    ++attempts;
    const Point3 p = uniform_in_box(rng, region);
    // Open ball: points at exactly the radius are admissible.
    if ((p - exclusion_center).squaredNorm() >= r2) {
      mics.positions.push_back(p);
    }
    if (static_cast<double>(attempts) * kMinAcceptance >
        static_cast<double>(mics.positions.size() + 1)) {
      throw std::invalid_argument(
          "sample_microphones: admissible region has negligible volume");
    }
  }
  return mics;
}

MicArray sample_validation_points(const RoomSpec& room, std::size_t count, const Point3& center,
                                  double radius, std::uint64_t seed) {
  (void)room;
  if (!(radius > 0.0)) {
    throw std::invalid_argument("sample_validation_points: radius must be > 0");
  }
  if (count < 1) throw std::invalid_argument("sample_validation_points: count must be >= 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MicArray out;
  out.positions.reserve(count);
  while (out.positions.size() < count) {
    const Eigen::Vector3d v(u(rng), u(rng), u(rng));
    if (v.squaredNorm() < 1.0) out.positions.push_back(center + radius * v);
  }
  return out;
}

std::array<double, 6> face_areas(const RoomSpec& room) {
  const auto& L = room.dimensions;
  const double yz = L.y() * L.z();
  const double xz = L.x() * L.z();
  const double xy = L.x() * L.y();
  return {yz, yz, xz, xz, xy, xy};
}

BoundaryCloud sample_boundary(const RoomSpec& room, std::size_t count, std::uint64_t seed) {
  room.validate();
  if (count < 1) throw std::invalid_argument("sample_boundary: count must be >= 1");
  const auto areas = face_areas(room);
  Rng rng(seed);
  std::discrete_distribution<int> pick_face(areas.begin(), areas.end());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto& L = room.dimensions;
  BoundaryCloud cloud;
  cloud.points.reserve(count);
  cloud.normals.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int face = pick_face(rng);
    const int axis = face / 2;
    const bool upper = face % 2 == 1;
    Point3 p;
    for (int d = 0; d < 3; ++d) p[d] = L[d] * u(rng);
    p[axis] = upper ? L[axis] : 0.0;
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    n[axis] = upper ? 1.0 : -1.0;
    cloud.points.push_back(p);
    cloud.normals.emplace_back(n);
  }
  return cloud;
}

UnitVector3 random_direction(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Eigen::Vector3d v(g(rng), g(rng), g(rng));
    if (v.squaredNorm() > 1e-24) return UnitVector3(v);
  }
}

std::vector<Point3> perturb_positions(std::span<const Point3> points, double magnitude,
                                      std::uint64_t seed, PerturbationMode mode) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw std::invalid_argument("perturb_positions: magnitude must be finite and >= 0");
  }
  std::vector<Point3> out(points.begin(), points.end());
  if (magnitude == 0.0) return out;
  Rng rng(seed);
  if (mode == PerturbationMode::kShared) {
    const Eigen::Vector3d shift = magnitude * random_direction(rng).vector();
    for (auto& p : out) p += shift;
  } else {
    for (auto& p : out) p += magnitude * random_direction(rng).vector();
  }
  return out;
}

}  // namespace bisf
