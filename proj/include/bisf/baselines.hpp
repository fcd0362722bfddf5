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
#include <span>
#include <vector>

#include "bisf/geometry.hpp"
#include "bisf/types.hpp"

namespace bisf {

/// Prediction at r is the measurement of the closest microphone (lowest
/// index on ties).
CVector nearest_neighbor(const MicArray& mics, const CVector& y, std::span<const Point3> points);

/// Ridge solution (Phi^H Phi / sigma^2 + I / sigma_alpha^2)^{-1} Phi^H y / sigma^2,
/// solved in coefficient space.
CVector tikhonov(const CVector& y, const CMatrix& phi, double sigma2, double sigma_alpha2);

struct LassoConfig {
  double lambda = 0.0;
  int max_iterations = 2000;
  double tolerance = 1e-9;
};

struct LassoResult {
  CVector coefficients;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// (1 / 2 sigma^2) ||y - Phi a||^2 + lambda sum_p |a_p|.
double lasso_objective(const CVector& y, const CMatrix& phi, double sigma2, double lambda,
                       const CVector& alpha);

/// Accelerated proximal gradient (FISTA) with complex soft-thresholding and
/// a monotone restart. Returns the best iterate; `converged` is false when
/// the iteration cap was reached first.
LassoResult lasso(const CVector& y, const CMatrix& phi, double sigma2, const LassoConfig& config,
                  const CVector* warm_start = nullptr);

/// Largest eigenvalue of Phi^H Phi.
double spectral_norm_squared(const CMatrix& phi);

/// Smallest lambda with an all-zero solution: ||Phi^H y||_inf / sigma^2.
double lasso_null_threshold(const CVector& y, const CMatrix& phi, double sigma2);

/// `count` log-spaced values spanning [lo_ratio, 1] x the null threshold, ascending.
std::vector<double> lasso_lambda_grid(const CVector& y, const CMatrix& phi, double sigma2,
                                      std::size_t count = 20, double lo_ratio = 1e-4);

/// K-fold cross-validation over microphones. Returns the grid value with the
/// smallest held-out squared error; ties go to the larger lambda.
double select_lambda(const CVector& y, const CMatrix& phi, double sigma2,
                     std::span<const double> grid, int folds, std::uint64_t seed,
                     const LassoConfig& base = {});

}  // namespace bisf
