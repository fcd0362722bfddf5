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

#include <Eigen/Eigenvalues>

#include "bisf/bayes.hpp"
#include "bisf/dictionary.hpp"
#include "bisf/geometry.hpp"
#include "bisf/random.hpp"
#include "oracles.hpp"

using namespace bisf;

namespace {

struct Instance {
  PlaneWaveDictionary dict;
  MicArray mics;
  BoundaryCloud cloud;
  CMatrix phi;
  BoundaryMatrices boundary;
  CVector y;
};

Instance make_instance(std::size_t M, std::size_t P, std::size_t B, std::uint64_t seed) {
  const RoomSpec room;
  Instance in{PlaneWaveDictionary::fibonacci(wavenumber(250.0, 343.0), P),
              sample_microphones(room, M, Point3(3.75, 2, 1.5), 0.5, seed),
              sample_boundary(room, B, seed + 1),
              {},
              {},
              {}};
  in.phi = build_phi(in.dict, in.mics.positions);
  in.boundary = BoundaryMatrices::build(in.dict, in.cloud);
  Rng rng(seed + 2);
  std::normal_distribution<double> g;
  in.y.resize(static_cast<Index>(M));
  for (Index m = 0; m < in.y.size(); ++m) in.y[m] = Complex(g(rng), g(rng));
  return in;
}

Hyperparameters hp(double s2, double sa2, double mu, Complex beta) {
  Hyperparameters h;
  h.sigma2 = s2;
  h.sigma_alpha2 = sa2;
  h.mu = mu;
  h.beta = beta;
  return h;
}

}  // namespace

TEST_CASE("mu = 0 and an empty boundary give the isotropic prior") {
  const Instance in = make_instance(10, 30, 20, 1);
  const PriorCovariance a = build_sigma_alpha(in.boundary, hp(0.1, 2.5, 0.0, {1.0, 0.5}));
  CHECK((a.covariance - 2.5 * CMatrix::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-15);
  const PriorCovariance b =
      build_sigma_alpha(BoundaryMatrices::empty(30), hp(0.1, 2.5, 3.0, {1.0, 0.5}));
  CHECK((b.covariance - 2.5 * CMatrix::Identity(30, 30)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("boundary prior shrinks the isotropic covariance") {
  const Instance in = make_instance(10, 40, 25, 2);
  const PriorCovariance p = build_sigma_alpha(in.boundary, hp(0.1, 3.0, 0.05, {0.3, -1.2}));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p.covariance / 3.0);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
  // Against an explicit inverse.
  const CMatrix a = in.boundary.impedance_operator({0.3, -1.2});
  const CMatrix expect =
      3.0 * oracle::hermitian_inverse(CMatrix::Identity(40, 40) + 0.05 * a.adjoint() * a);
  CHECK(oracle::relative_error(p.covariance, expect) < 1e-10);
}

TEST_CASE("Q is Hermitian and xi solves Q xi = y") {
  const Instance in = make_instance(15, 40, 30, 3);
  const PosteriorModel post = build_posterior(in.y, in.phi, in.boundary, hp(0.2, 1.5, 0.1, {2.0, 1.0}));
  CHECK(hermitian_defect(post.q()) < 1e-12);
  CHECK((post.q() * post.xi() - in.y).norm() / in.y.norm() < 1e-10);
}

TEST_CASE("vanishing prior scale leaves only the noise") {
  const Instance in = make_instance(8, 20, 10, 4);
  const PosteriorModel post = build_posterior(in.y, in.phi, in.boundary, hp(0.3, 1e-14, 0.1, {1.0, 0.0}));
  CHECK((post.q() - 0.3 * CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("zero data gives zero coefficients") {
  const Instance in = make_instance(8, 20, 10, 5);
  const PosteriorModel post =
      build_posterior(CVector::Zero(8), in.phi, in.boundary, hp(0.3, 1.0, 0.1, {1.0, 0.0}));
  CHECK(map_coefficients(post).cwiseAbs().maxCoeff() == 0.0);
  CHECK(map_coefficients_primal(post).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("primal and dual MAP estimates agree") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const Instance in = make_instance(20, 50, 30, seed);
    const PosteriorModel post =
        build_posterior(in.y, in.phi, in.boundary, hp(0.05, 2.0, 0.02, {0.7, 0.4}));
    CHECK(oracle::relative_error(map_coefficients(post), map_coefficients_primal(post)) < 1e-8);
  }
}

TEST_CASE("noiseless single atom is reproduced at the microphones") {
  const Instance in = make_instance(40, 30, 10, 6);
  CVector e1 = CVector::Zero(30);
  e1[0] = 1.0;
  const CVector y = in.phi * e1;
  const PosteriorModel post = build_posterior(y, in.phi, in.boundary, hp(1e-10, 1.0, 0.0, {1.0, 0.0}));
  const CVector refit = evaluate_field(in.dict, map_coefficients(post), in.mics.positions);
  CHECK((refit - y).norm() / y.norm() < 1e-3);
}

TEST_CASE("predictive mean is the field of the MAP coefficients") {
  const Instance in = make_instance(20, 50, 30, 7);
  const PosteriorModel post = build_posterior(in.y, in.phi, in.boundary, hp(0.1, 1.0, 0.05, {1.0, 1.0}));
  const MicArray query = sample_validation_points(RoomSpec{}, 25, Point3(3.75, 2, 1.5), 0.5, 8);
  const Prediction pred = predict(post, in.dict, query.positions);
  const CVector direct = evaluate_field(in.dict, map_coefficients(post), query.positions);
  CHECK(oracle::relative_error(pred.mean, direct) < 1e-8);
  CHECK(pred.variance.minCoeff() >= 0.0);
}

TEST_CASE("interpolation limit at a microphone") {
  const Instance in = make_instance(10, 60, 10, 9);
  const PosteriorModel post = build_posterior(in.y, in.phi, in.boundary, hp(1e-12, 1.0, 0.0, {1.0, 0.0}));
  const std::vector<Point3> at{in.mics.positions[3]};
  const Prediction pred = predict(post, in.dict, at);
  CHECK(std::abs(pred.mean[0] - in.y[3]) < 1e-6 * std::abs(in.y[3]));
  CHECK(pred.variance[0] < 1e-6);
}

TEST_CASE("no data gives the prior predictive") {
  const Instance in = make_instance(5, 20, 15, 10);
  const Hyperparameters h = hp(0.1, 1.7, 0.2, {0.5, 0.5});
  const PosteriorModel post = build_posterior(CVector(0), CMatrix(0, 20), in.boundary, h);
  const std::vector<Point3> at{{3.9, 2.1, 1.4}, {4.2, 1.8, 1.0}};
  const Prediction pred = predict(post, in.dict, at);
  const CMatrix phi_q = build_phi(in.dict, at);
  const PriorCovariance prior = build_sigma_alpha(in.boundary, h);
  for (Index j = 0; j < 2; ++j) {
    CHECK(std::abs(pred.mean[j]) == 0.0);
    const double expect = (phi_q.row(j) * prior.covariance * phi_q.row(j).adjoint())(0, 0).real();
    CHECK(pred.variance[j] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("hyperparameters are validated") {
  CHECK_THROWS_AS(hp(0.0, 1.0, 0.0, {1, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(hp(1.0, -1.0, 0.0, {1, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(hp(1.0, 1.0, -0.1, {1, 0}).validate(), std::invalid_argument);
}
