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

#include <span>
#include <vector>

#include "bisf/geometry.hpp"
#include "bisf/types.hpp"

namespace bisf {

/// k = 2 pi f / c.
double wavenumber(double frequency_hz, double sound_speed);

/// Offset Fibonacci lattice on the unit sphere:
/// z_i = 1 - 2 (i + 1/2) / P, azimuth_i = i * pi * (3 - sqrt 5).
std::vector<UnitVector3> fibonacci_directions(std::size_t count);

/// Plane-wave basis e^{i k eta_p . r} for a fixed wavenumber.
class PlaneWaveDictionary {
 public:
  PlaneWaveDictionary(double wavenumber, std::vector<UnitVector3> directions);

  static PlaneWaveDictionary fibonacci(double wavenumber, std::size_t count) {
    return PlaneWaveDictionary(wavenumber, fibonacci_directions(count));
  }

  double wavenumber() const { return k_; }
  Index size() const { return wave_vectors_.cols(); }
  const std::vector<UnitVector3>& directions() const { return directions_; }
  /// 3 x P matrix of k_p = k eta_p.
  const Eigen::Matrix3Xd& wave_vectors() const { return wave_vectors_; }

 private:
  double k_;
  std::vector<UnitVector3> directions_;
  Eigen::Matrix3Xd wave_vectors_;
};

/// M x P, entry exp(i k_p . r_m).
CMatrix build_phi(const PlaneWaveDictionary& dict, std::span<const Point3> points);

/// B x P, entry i (k_p . n_b) exp(i k_p . r_b): normal derivative of each atom.
CMatrix build_psi(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud);

/// B x P, entry i k exp(i k_p . r_b).
CMatrix build_phi_tilde(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud);

/// u(r) = sum_p alpha_p exp(i k_p . r).
CVector evaluate_field(const PlaneWaveDictionary& dict, const CVector& coefficients,
                       std::span<const Point3> points);

}  // namespace bisf
