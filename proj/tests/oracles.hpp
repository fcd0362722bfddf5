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


// Independent reference implementations shared by the unit tests and the
// acceptance binary. Nothing here calls into the library except for types.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bisf/types.hpp"

namespace bisf::oracle {

// Breadth-first closure of the six wall mirrorings of a shoebox room. An
// image's order is the depth at which its position first appears, so
// counts[n] is the number of distinct images needing exactly n reflections.
inline std::vector<std::size_t> mirror_image_counts(const Eigen::Vector3d& dims,
                                                    const Point3& source, int max_order) {
  using Key = std::tuple<long long, long long, long long>;
  auto key = [](const Point3& p) {
    return Key{std::llround(p.x() * 1e6), std::llround(p.y() * 1e6), std::llround(p.z() * 1e6)};
  };
  std::set<Key> seen{key(source)};
  std::vector<Point3> frontier{source};
  std::vector<std::size_t> counts{1};
  for (int depth = 1; depth <= max_order; ++depth) {
    std::vector<Point3> next;
    for (const Point3& p : frontier) {
      for (int axis = 0; axis < 3; ++axis) {
        for (double wall : {0.0, dims[axis]}) {
          Point3 q = p;
          q[axis] = 2.0 * wall - p[axis];
          if (seen.insert(key(q)).second) next.push_back(q);
        }
      }
    }
    counts.push_back(next.size());
    frontier = std::move(next);
  }
  return counts;
}

inline CMatrix hermitian_inverse(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  const RVector inv = es.eigenvalues().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

// 1/2 y^H Q^{-1} y + 1/2 log|Q| from a dense eigendecomposition of Q, with
// Sigma built by explicitly inverting I + mu A^H A.
inline double negative_log_marginal_likelihood(const CVector& y, const CMatrix& phi,
                                               const CMatrix& psi, const CMatrix& phi_tilde,
                                               double sigma2, double sigma_alpha2, double mu,
                                               Complex beta) {
  const Index P = phi.cols();
  CMatrix precision = CMatrix::Identity(P, P);
  if (psi.rows() > 0) {
    const CMatrix a = beta * psi + phi_tilde;
    precision += mu * a.adjoint() * a;
  }
  const CMatrix sigma = sigma_alpha2 * hermitian_inverse(precision);
  CMatrix q = phi * sigma * phi.adjoint();
  q.diagonal().array() += sigma2;
  q = (0.5 * (q + q.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
  const CVector proj = es.eigenvectors().adjoint() * y;
  double j = 0.0;
  for (Index i = 0; i < q.rows(); ++i) {
    const double lam = es.eigenvalues()[i];
    j += 0.5 * std::norm(proj[i]) / lam + 0.5 * std::log(lam);
  }
  return j;
}

// Ridge estimate from the normal equations solved by a plain QR.
inline CVector ridge(const CVector& y, const CMatrix& phi, double sigma2, double sigma_alpha2) {
  const Index P = phi.cols();
  CMatrix stacked(phi.rows() + P, P);
  stacked << phi / std::sqrt(sigma2), CMatrix::Identity(P, P) / std::sqrt(sigma_alpha2);
  CVector rhs = CVector::Zero(phi.rows() + P);
  rhs.head(phi.rows()) = y / std::sqrt(sigma2);
  return stacked.colPivHouseholderQr().solve(rhs);
}

struct LassoSolution {
  CVector coefficients;
  double objective = 0.0;
};

// Cyclic coordinate descent on 1/(2 s2) ||y - Phi a||^2 + lambda ||a||_1 with
// the complex soft-threshold update, run until no coefficient moves.
inline LassoSolution coordinate_descent_lasso(const CVector& y, const CMatrix& phi, double sigma2,
                                              double lambda, int max_sweeps = 200000) {
  const Index P = phi.cols();
  CVector a = CVector::Zero(P);
  CVector r = y;
  const double tau = lambda * sigma2;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double largest = 0.0;
    for (Index j = 0; j < P; ++j) {
      const double n2 = phi.col(j).squaredNorm();
      const Complex z = phi.col(j).dot(r) + n2 * a[j];
      const double mag = std::abs(z);
      const Complex next = mag > tau ? z * (1.0 - tau / mag) / n2 : Complex(0.0, 0.0);
      const Complex delta = next - a[j];
      if (delta != Complex(0.0, 0.0)) {
        r -= phi.col(j) * delta;
        a[j] = next;
        largest = std::max(largest, std::abs(delta));
      }
    }
    if (largest < 1e-15) break;
  }
  const double f = 0.5 / sigma2 * (y - phi * a).squaredNorm() + lambda * a.cwiseAbs().sum();
  return {a, f};
}

// Closed-form Lasso instance (M=10, P=20) also built by tests/tools/lasso_reference.py.
struct LassoInstance {
  CMatrix phi;
  CVector y;
  double sigma2 = 0.5;
};

inline LassoInstance closed_form_lasso_instance() {
  constexpr Index M = 10;
  constexpr Index P = 20;
  LassoInstance inst;
  inst.phi.resize(M, P);
  inst.y.resize(M);
  for (Index m = 0; m < M; ++m) {
    for (Index p = 0; p < P; ++p) {
      const double md = static_cast<double>(m);
      const double pd = static_cast<double>(p);
      const double phase = 3.0 * std::sin(1.3 * md + 0.7 * pd * pd) + 0.5 * md * pd;
      inst.phi(m, p) = std::polar(1.0, phase) / std::sqrt(static_cast<double>(M));
    }
    const double md = static_cast<double>(m);
    inst.y[m] = Complex(std::cos(0.9 * md), std::sin(0.4 * md * md));
  }
  return inst;
}

// SCS (eps 1e-12) objective values for lambda = ratio * lambda_max; coordinate
// descent agrees to 1e-15.
inline constexpr double kLassoLambdaMax = 2.7748706967252965;
inline constexpr std::array<std::pair<double, double>, 2> kLassoReference{{
    {0.3, 5.76440948042768},
    {0.05, 1.399482027448388},
}};

// Seven-point Laplacian of a scalar field sampled by `f`.
template <typename F>
Complex seven_point_laplacian(const F& f, const Point3& r, double h) {
  Complex acc = -6.0 * f(r);
  for (int axis = 0; axis < 3; ++axis) {
    Point3 e = Point3::Zero();
    e[axis] = h;
    acc += f(r + e) + f(r - e);
  }
  return acc / (h * h);
}

// Direct sum of plane waves, independent of the library's kernels.
inline Complex plane_wave_sum(const Eigen::Matrix3Xd& wave_vectors, const CVector& coeffs,
                              const Point3& r) {
  Complex u(0.0, 0.0);
  for (Index p = 0; p < wave_vectors.cols(); ++p) {
    u += coeffs[p] * std::polar(1.0, wave_vectors.col(p).dot(r));
  }
  return u;
}

// Relative error used throughout: |a - b| / max(|a|, |b|), or 0 when both vanish.
inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

template <typename A, typename B>
double relative_error(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace bisf::oracle
