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

#include "bisf/ism.hpp"

#include <cstdlib>
#include <random>
#include <stdexcept>

#include "bisf/dictionary.hpp"
#include "bisf/kernels.hpp"

namespace bisf {

std::vector<ImageSource> enumerate_images(const RoomSpec& room, int max_order) {
  room.validate();
  if (max_order < 0) throw std::invalid_argument("enumerate_images: max_order must be >= 0");
  const auto& L = room.dimensions;
  const auto& s = room.source;
  const double rho = room.reflection_coefficient;

  // Per axis: candidates (coordinate, reflections) with reflections <= max_order.
  struct AxisImage {
    double coord;
    int reflections;
  };
  std::array<std::vector<AxisImage>, 3> axes;
  const int nmax = (max_order + 1) / 2 + 1;
  for (int d = 0; d < 3; ++d) {
    for (int n = -nmax; n <= nmax; ++n) {
      for (int q = 0; q <= 1; ++q) {
        const int refl = std::abs(n - q) + std::abs(n);
        if (refl > max_order) continue;
        axes[d].push_back({(1 - 2 * q) * s[d] + 2.0 * n * L[d], refl});
      }
    }
  }

  std::vector<ImageSource> images;
  for (const auto& ix : axes[0]) {
    for (const auto& iy : axes[1]) {
      const int rxy = ix.reflections + iy.reflections;
      if (rxy > max_order) continue;
      for (const auto& iz : axes[2]) {
        const int order = rxy + iz.reflections;
        if (order > max_order) continue;
        images.push_back({Point3(ix.coord, iy.coord, iz.coord), std::pow(rho, order), order});
      }
    }
  }
  return images;
}

std::size_t image_count_at_order(int n) {
  if (n < 0) return 0;
  if (n == 0) return 1;
  const auto m = static_cast<std::size_t>(n);
  return 4 * m * m + 2;
}

Complex transfer_function(const RoomSpec& room, const Point3& receiver, double k, int max_order) {
  const auto images = enumerate_images(room, max_order);
  const std::array<Point3, 1> rx{receiver};
  CVector out;
  kernels::image_source_field(images, rx, k, out);
  return out[0];
}

CVector transfer_functions(std::span<const ImageSource> images, std::span<const Point3> receivers,
                           double k) {
  CVector out;
  kernels::image_source_field(images, receivers, k, out);
  return out;
}

double noise_variance_for_snr(const CVector& clean, double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  if (!std::isfinite(snr_db)) throw std::invalid_argument("SNR must be finite or +inf");
  if (clean.size() == 0) return 0.0;
  const double power = clean.squaredNorm() / static_cast<double>(clean.size());
  return power * std::pow(10.0, -snr_db / 10.0);
}

CVector add_complex_noise(const CVector& clean, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  if (variance == 0.0) return clean;
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
  CVector noisy = clean;
  for (Index m = 0; m < noisy.size(); ++m) {
    const double re = g(rng);
    const double im = g(rng);
    noisy[m] += Complex(re, im);
  }
  return noisy;
}

SimSnapshot simulate_snapshot(std::span<const ImageSource> images, const MicArray& mics,
                              double frequency, double sound_speed, double snr_db,
                              std::uint64_t seed) {
  mics.validate();
  SimSnapshot snap;
  snap.frequency = frequency;
  snap.sound_speed = sound_speed;
  snap.seed = seed;
  snap.clean = transfer_functions(images, mics.positions, wavenumber(frequency, sound_speed));
  snap.noise_variance = noise_variance_for_snr(snap.clean, snr_db);
  snap.noisy = add_complex_noise(snap.clean, snap.noise_variance, seed);
  return snap;
}

SimSnapshot simulate_snapshot(const RoomSpec& room, const MicArray& mics, double frequency,
                              double sound_speed, double snr_db, int max_order,
                              std::uint64_t seed) {
  const auto images = enumerate_images(room, max_order);
  return simulate_snapshot(images, mics, frequency, sound_speed, snr_db, seed);
}

}  // namespace bisf
