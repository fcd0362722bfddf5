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

// Hot loops, each in an OpenMP-parallel form and a plain serial form. The
// serial versions are the reference the tests compare against; the
// benchmark target times both.

#include <span>
#include <vector>

#include "bisf/types.hpp"

namespace bisf {

struct ImageSource;

namespace kernels {

/// out(m, p) = exp(i k_p . r_m).
void plane_wave_matrix(const Eigen::Matrix3Xd& wave_vectors, std::span<const Point3> points,
                       CMatrix& out);
void plane_wave_matrix_serial(const Eigen::Matrix3Xd& wave_vectors,
                              std::span<const Point3> points, CMatrix& out);

/// out(b, p) = i (k_p . n_b) exp(i k_p . r_b).
void normal_derivative_matrix(const Eigen::Matrix3Xd& wave_vectors,
                              std::span<const Point3> points,
                              std::span<const Eigen::Vector3d> normals, CMatrix& out);
void normal_derivative_matrix_serial(const Eigen::Matrix3Xd& wave_vectors,
                                     std::span<const Point3> points,
                                     std::span<const Eigen::Vector3d> normals, CMatrix& out);

/// out(j) = sum_p coeffs_p exp(i k_p . r_j).
void synthesize(const Eigen::Matrix3Xd& wave_vectors, const CVector& coeffs,
                std::span<const Point3> points, CVector& out);
void synthesize_serial(const Eigen::Matrix3Xd& wave_vectors, const CVector& coeffs,
                       std::span<const Point3> points, CVector& out);

/// out(j) = sum_s amplitude_s exp(i k d_sj) / (4 pi d_sj). Throws
/// NumericalError if a receiver is within `min_distance` of an image.
void image_source_field(std::span<const ImageSource> images, std::span<const Point3> receivers,
                        double k, CVector& out, double min_distance = 1e-9);
void image_source_field_serial(std::span<const ImageSource> images,
                               std::span<const Point3> receivers, double k, CVector& out,
                               double min_distance = 1e-9);

}  // namespace kernels
}  // namespace bisf
