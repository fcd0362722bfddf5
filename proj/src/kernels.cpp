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

#include "bisf/kernels.hpp"

#include <string>

#include "bisf/ism.hpp"

namespace bisf::kernels {

namespace {

inline Complex unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

inline void plane_wave_column(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                              Index p, CMatrix& out) {
  const Eigen::Vector3d kp = kv.col(p);
  for (Index m = 0; m < static_cast<Index>(points.size()); ++m) {
    out(m, p) = unit_phase(kp.dot(points[static_cast<std::size_t>(m)]));
  }
}

inline void normal_derivative_column(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                                     std::span<const Eigen::Vector3d> normals, Index p,
                                     CMatrix& out) {
  const Eigen::Vector3d kp = kv.col(p);
  for (Index b = 0; b < static_cast<Index>(points.size()); ++b) {
    const auto i = static_cast<std::size_t>(b);
    out(b, p) = kI * kp.dot(normals[i]) * unit_phase(kp.dot(points[i]));
  }
}

inline Complex synthesize_at(const Eigen::Matrix3Xd& kv, const CVector& coeffs,
                             const Point3& r) {
  Complex acc{0.0, 0.0};
  for (Index p = 0; p < kv.cols(); ++p) acc += coeffs[p] * unit_phase(kv.col(p).dot(r));
  return acc;
}

inline Complex image_sum_at(std::span<const ImageSource> images, const Point3& r, double k,
                            double min_distance, bool& too_close) {
  Complex acc{0.0, 0.0};
  for (const auto& img : images) {
    const double d = (img.position - r).norm();
    if (d < min_distance) {
      too_close = true;
      return acc;
    }
    acc += img.amplitude * unit_phase(k * d) / (4.0 * kPi * d);
  }
  return acc;
}

void check_normals(std::span<const Point3> points, std::span<const Eigen::Vector3d> normals) {
  if (points.size() != normals.size()) {
    throw std::invalid_argument("normal_derivative_matrix: points/normals size mismatch");
  }
}

[[noreturn]] void throw_coincident() {
  throw NumericalError("image_source_field: receiver coincides with an image source");
}

}  // namespace

void plane_wave_matrix(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                       CMatrix& out) {
  out.resize(static_cast<Index>(points.size()), kv.cols());
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < kv.cols(); ++p) plane_wave_column(kv, points, p, out);
}

void plane_wave_matrix_serial(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                              CMatrix& out) {
  out.resize(static_cast<Index>(points.size()), kv.cols());
  for (Index p = 0; p < kv.cols(); ++p) plane_wave_column(kv, points, p, out);
}

void normal_derivative_matrix(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                              std::span<const Eigen::Vector3d> normals, CMatrix& out) {
  check_normals(points, normals);
  out.resize(static_cast<Index>(points.size()), kv.cols());
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < kv.cols(); ++p) normal_derivative_column(kv, points, normals, p, out);
}

void normal_derivative_matrix_serial(const Eigen::Matrix3Xd& kv, std::span<const Point3> points,
                                     std::span<const Eigen::Vector3d> normals, CMatrix& out) {
  check_normals(points, normals);
  out.resize(static_cast<Index>(points.size()), kv.cols());
  for (Index p = 0; p < kv.cols(); ++p) normal_derivative_column(kv, points, normals, p, out);
}

void synthesize(const Eigen::Matrix3Xd& kv, const CVector& coeffs,
                std::span<const Point3> points, CVector& out) {
  const auto n = static_cast<Index>(points.size());
  out.resize(n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    out[j] = synthesize_at(kv, coeffs, points[static_cast<std::size_t>(j)]);
  }
}

void synthesize_serial(const Eigen::Matrix3Xd& kv, const CVector& coeffs,
                       std::span<const Point3> points, CVector& out) {
  const auto n = static_cast<Index>(points.size());
  out.resize(n);
  for (Index j = 0; j < n; ++j) {
    out[j] = synthesize_at(kv, coeffs, points[static_cast<std::size_t>(j)]);
  }
}

void image_source_field(std::span<const ImageSource> images, std::span<const Point3> receivers,
                        double k, CVector& out, double min_distance) {
  const auto n = static_cast<Index>(receivers.size());
  out.resize(n);
  bool too_close = false;
#pragma omp parallel for schedule(static) reduction(|| : too_close)
  for (Index j = 0; j < n; ++j) {
    bool local = false;
    out[j] = image_sum_at(images, receivers[static_cast<std::size_t>(j)], k, min_distance, local);
    too_close = too_close || local;
  }
  if (too_close) throw_coincident();
}

void image_source_field_serial(std::span<const ImageSource> images,
                               std::span<const Point3> receivers, double k, CVector& out,
                               double min_distance) {
  const auto n = static_cast<Index>(receivers.size());
  out.resize(n);
  for (Index j = 0; j < n; ++j) {
    bool too_close = false;
    out[j] =
        image_sum_at(images, receivers[static_cast<std::size_t>(j)], k, min_distance, too_close);
    if (too_close) throw_coincident();
  }
}

}  // namespace bisf::kernels
