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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bisf/geometry.hpp"
#include "bisf/types.hpp"

namespace bisf {

struct ImageSource {
  Point3 position;
  double amplitude = 1.0;  // reflection_coefficient^order
  int order = 0;
};

/// Mirror images of the room's source with total reflection order at most
/// `max_order`. Image (n, q) along one axis sits at (1 - 2q) s + 2 n L and
/// accounts for |n - q| + |n| reflections.
std::vector<ImageSource> enumerate_images(const RoomSpec& room, int max_order);

/// Number of images with order exactly n in a shoebox (4 n^2 + 2 for n >= 1).
std::size_t image_count_at_order(int n);

/// Frequency-domain pressure at `receiver`, time convention e^{-i w t}:
/// sum_j a_j e^{i k d_j} / (4 pi d_j).
Complex transfer_function(const RoomSpec& room, const Point3& receiver, double k, int max_order);

/// Same, for many receivers and a precomputed image set.
CVector transfer_functions(std::span<const ImageSource> images, std::span<const Point3> receivers,
                           double k);

/// Default truncation order. The incoherent tail beyond order N carries a
/// fraction of about rho^(2(N+1)) of the reverberant energy; 50 keeps that
/// below 1% for rho = 0.95.
inline constexpr int kDefaultMaxOrder = 50;

struct SimSnapshot {
  double frequency = 0.0;
  double sound_speed = 343.0;
  CVector clean;
  CVector noisy;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Noise variance sigma^2 = mean |u|^2 * 10^(-snr/10); infinite SNR gives 0.
double noise_variance_for_snr(const CVector& clean, double snr_db);

/// Adds circularly-symmetric complex Gaussian noise of total variance
/// `variance` (variance / 2 on each of the real and imaginary parts).
CVector add_complex_noise(const CVector& clean, double variance, std::uint64_t seed);

SimSnapshot simulate_snapshot(const RoomSpec& room, const MicArray& mics, double frequency,
                              double sound_speed, double snr_db, int max_order,
                              std::uint64_t seed);

/// Variant with a precomputed image set, used by the Monte-Carlo harness.
SimSnapshot simulate_snapshot(std::span<const ImageSource> images, const MicArray& mics,
                              double frequency, double sound_speed, double snr_db,
                              std::uint64_t seed);

}  // namespace bisf
