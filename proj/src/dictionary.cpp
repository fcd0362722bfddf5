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

#include "bisf/dictionary.hpp"

#include <stdexcept>

#include "bisf/kernels.hpp"

namespace bisf {

double wavenumber(double frequency_hz, double sound_speed) {
  if (!(frequency_hz > 0.0) || !(sound_speed > 0.0)) {
    throw std::invalid_argument("wavenumber: frequency and sound speed must be positive");
  }
  return 2.0 * kPi * frequency_hz / sound_speed;
}

std::vector<UnitVector3> fibonacci_directions(std::size_t count) {
  if (count < 1) throw std::invalid_argument("fibonacci_directions: count must be >= 1");
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  const auto n = static_cast<double>(count);
  std::vector<UnitVector3> dirs;
  dirs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double fi = static_cast<double>(i);
    const double z = 1.0 - 2.0 * (fi + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = fi * golden_angle;
    dirs.emplace_back(rho * std::cos(az), rho * std::sin(az), z);
  }
  return dirs;
}

PlaneWaveDictionary::PlaneWaveDictionary(double wavenumber, std::vector<UnitVector3> directions)
    : k_(wavenumber), directions_(std::move(directions)) {
  if (!(k_ > 0.0) || !std::isfinite(k_)) {
    throw std::invalid_argument("PlaneWaveDictionary: wavenumber must be positive");
  }
  if (directions_.empty()) {
    throw std::invalid_argument("PlaneWaveDictionary: need at least one direction");
  }
  wave_vectors_.resize(3, static_cast<Index>(directions_.size()));
  for (std::size_t p = 0; p < directions_.size(); ++p) {
    wave_vectors_.col(static_cast<Index>(p)) = k_ * directions_[p].vector();
  }
}

CMatrix build_phi(const PlaneWaveDictionary& dict, std::span<const Point3> points) {
  CMatrix out;
  kernels::plane_wave_matrix(dict.wave_vectors(), points, out);
  return out;
}

namespace {
std::vector<Eigen::Vector3d> normal_vectors(const BoundaryCloud& cloud) {
  std::vector<Eigen::Vector3d> n;
  n.reserve(cloud.size());
  for (const auto& u : cloud.normals) n.push_back(u.vector());
  return n;
}
}  // namespace

CMatrix build_psi(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud) {
  cloud.validate();
  const auto normals = normal_vectors(cloud);
  CMatrix out;
  kernels::normal_derivative_matrix(dict.wave_vectors(), cloud.points, normals, out);
  return out;
}

CMatrix build_phi_tilde(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud) {
  cloud.validate();
  CMatrix out;
  kernels::plane_wave_matrix(dict.wave_vectors(), cloud.points, out);
  out *= kI * dict.wavenumber();
  return out;
}

CVector evaluate_field(const PlaneWaveDictionary& dict, const CVector& coefficients,
                       std::span<const Point3> points) {
  if (coefficients.size() != dict.size()) {
    throw std::invalid_argument("evaluate_field: coefficient count does not match dictionary");
  }
  CVector out;
  kernels::synthesize(dict.wave_vectors(), coefficients, points, out);
  return out;
}

}  // namespace bisf
