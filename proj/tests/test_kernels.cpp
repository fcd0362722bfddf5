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


#include <doctest.h>

#include <omp.h>

#include "bisf/dictionary.hpp"
#include "bisf/geometry.hpp"
#include "bisf/ism.hpp"
#include "bisf/kernels.hpp"

using namespace bisf;

// The OpenMP kernels split work by rows or columns only, so every entry is
// computed by the same arithmetic as the serial reference: results must be
// bit-identical, whatever the thread count.

namespace {

struct Fixture {
  PlaneWaveDictionary dict = PlaneWaveDictionary::fibonacci(5.5, 173);
  MicArray mics = sample_microphones(RoomSpec{}, 61, Point3(3.75, 2, 1.5), 0.5, 4);
  BoundaryCloud cloud = sample_boundary(RoomSpec{}, 89, 4);
  std::vector<Eigen::Vector3d> normals() const {
    std::vector<Eigen::Vector3d> n;
    for (const auto& u : cloud.normals) n.push_back(u.vector());
    return n;
  }
};

void with_threads(int n, const std::function<void()>& body) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(n);
  body();
  omp_set_num_threads(saved);
}

}  // namespace

TEST_CASE("plane_wave_matrix matches its serial reference") {
  Fixture f;
  CMatrix ref;
  kernels::plane_wave_matrix_serial(f.dict.wave_vectors(), f.mics.positions, ref);
  for (int threads : {1, 2, 4, 7}) {
    with_threads(threads, [&] {
      CMatrix par;
      kernels::plane_wave_matrix(f.dict.wave_vectors(), f.mics.positions, par);
      CHECK(par == ref);
    });
  }
}

TEST_CASE("normal_derivative_matrix matches its serial reference") {
  Fixture f;
  const auto n = f.normals();
  CMatrix ref;
  kernels::normal_derivative_matrix_serial(f.dict.wave_vectors(), f.cloud.points, n, ref);
  for (int threads : {1, 3, 8}) {
    with_threads(threads, [&] {
      CMatrix par;
      kernels::normal_derivative_matrix(f.dict.wave_vectors(), f.cloud.points, n, par);
      CHECK(par == ref);
    });
  }
}

TEST_CASE("synthesize matches its serial reference") {
  Fixture f;
  CVector coeffs(f.dict.size());
  for (Index p = 0; p < coeffs.size(); ++p) coeffs[p] = Complex(std::sin(p), std::cos(2.0 * p));
  CVector ref;
  kernels::synthesize_serial(f.dict.wave_vectors(), coeffs, f.mics.positions, ref);
  for (int threads : {1, 2, 5}) {
    with_threads(threads, [&] {
      CVector par;
      kernels::synthesize(f.dict.wave_vectors(), coeffs, f.mics.positions, par);
      CHECK(par == ref);
    });
  }
}

TEST_CASE("image_source_field matches its serial reference") {
  Fixture f;
  const auto images = enumerate_images(RoomSpec{}, 6);
  CVector ref;
  kernels::image_source_field_serial(images, f.mics.positions, 5.5, ref);
  for (int threads : {1, 2, 6}) {
    with_threads(threads, [&] {
      CVector par;
      kernels::image_source_field(images, f.mics.positions, 5.5, par);
      CHECK(par == ref);
    });
  }
}

TEST_CASE("kernels handle empty inputs") {
  Fixture f;
  CMatrix out;
  kernels::plane_wave_matrix(f.dict.wave_vectors(), {}, out);
  CHECK(out.rows() == 0);
  CHECK(out.cols() == f.dict.size());
}
