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

#include "bisf/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bisf/linalg.hpp"
#include "bisf/random.hpp"

namespace bisf {

CVector nearest_neighbor(const MicArray& mics, const CVector& y, std::span<const Point3> points) {
  if (mics.size() < 1) throw std::invalid_argument("nearest_neighbor: need at least one mic");
  if (static_cast<Index>(mics.size()) != y.size()) {
    throw std::invalid_argument("nearest_neighbor: one measurement per mic required");
  }
  CVector out(static_cast<Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < mics.size(); ++m) {
      const double d2 = (mics.positions[m] - points[j]).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = m;
      }
    }
    out[static_cast<Index>(j)] = y[static_cast<Index>(best)];
  }
  return out;
}

CVector tikhonov(const CVector& y, const CMatrix& phi, double sigma2, double sigma_alpha2) {
  if (phi.rows() != y.size()) throw std::invalid_argument("tikhonov: dimension mismatch");
  if (!(sigma2 > 0.0) || !(sigma_alpha2 > 0.0)) {
    throw std::invalid_argument("tikhonov: variances must be positive");
  }
  CMatrix lhs = CMatrix::Identity(phi.cols(), phi.cols()) / sigma_alpha2;
  lhs.noalias() += phi.adjoint() * phi / sigma2;
  const HermitianFactor f(lhs);
  return f.solve(CVector(phi.adjoint() * y / sigma2));
}

double lasso_objective(const CVector& y, const CMatrix& phi, double sigma2, double lambda,
                       const CVector& alpha) {
  return 0.5 / sigma2 * (y - phi * alpha).squaredNorm() + lambda * alpha.cwiseAbs().sum();
}

double spectral_norm_squared(const CMatrix& phi) {
  if (phi.size() == 0) return 0.0;
  const CMatrix g = phi.rows() <= phi.cols() ? CMatrix(phi * phi.adjoint())
                                             : CMatrix(phi.adjoint() * phi);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double lasso_null_threshold(const CVector& y, const CMatrix& phi, double sigma2) {
  return (phi.adjoint() * y).cwiseAbs().maxCoeff() / sigma2;
}

namespace {

void soft_threshold(CVector& v, double threshold) {
  for (Index p = 0; p < v.size(); ++p) {
    const double mag = std::abs(v[p]);
    v[p] = mag > threshold ? v[p] * (1.0 - threshold / mag) : Complex(0.0, 0.0);
  }
}

LassoResult lasso_with_step(const CVector& y, const CMatrix& phi, double sigma2,
                            const LassoConfig& config, double lipschitz_gram,
                            const CVector* warm_start) {
  const Index P = phi.cols();
  LassoResult res;
  res.coefficients = warm_start ? *warm_start : CVector::Zero(P);
  if (lipschitz_gram <= 0.0) {
    res.objective = lasso_objective(y, phi, sigma2, config.lambda, res.coefficients);
    res.converged = true;
    return res;
  }
  // Zero satisfies the optimality conditions once lambda reaches
  // ||Phi^H y||_inf / sigma^2; return it exactly rather than up to rounding.
  if (config.lambda >= lasso_null_threshold(y, phi, sigma2)) {
    res.coefficients = CVector::Zero(P);
    res.objective = lasso_objective(y, phi, sigma2, config.lambda, res.coefficients);
    res.converged = true;
    return res;
  }
  // Step t = sigma^2 / lambda_max(Phi^H Phi).
  const double t = sigma2 / lipschitz_gram;
  const double shrink = t * config.lambda;

  // Phi x and Phi z are carried along so each iteration needs one product
  // with Phi and one with Phi^H.
  CVector x = res.coefficients;
  CVector z = x;
  CVector phi_x = phi * x;
  CVector phi_z = phi_x;
  const double inv_2s2 = 0.5 / sigma2;
  double momentum = 1.0;
  double f_prev = inv_2s2 * (y - phi_x).squaredNorm() + config.lambda * x.cwiseAbs().sum();
  res.objective = f_prev;
  for (int it = 1; it <= config.max_iterations; ++it) {
    res.iterations = it;
    // Gradient of the smooth term (conjugate convention): -Phi^H (y - Phi z) / sigma^2.
    const CVector scaled_residual = (t / sigma2) * (y - phi_z);
    CVector x_next = z;
    x_next.noalias() += phi.adjoint() * scaled_residual;
    soft_threshold(x_next, shrink);
    CVector phi_next = phi * x_next;
    const double f_next =
        inv_2s2 * (y - phi_next).squaredNorm() + config.lambda * x_next.cwiseAbs().sum();

    if (f_next > f_prev) {
      // Monotone restart: drop momentum and retry from the last iterate.
      momentum = 1.0;
      z = x;
      phi_z = phi_x;
      continue;
    }
    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double w = (momentum - 1.0) / m_next;
    z = x_next + w * (x_next - x);
    phi_z = phi_next + w * (phi_next - phi_x);
    momentum = m_next;
    x = std::move(x_next);
    phi_x = std::move(phi_next);
    const double change = std::abs(f_prev - f_next);
    f_prev = f_next;
    if (change <= config.tolerance * std::max(1.0, std::abs(f_next))) {
      res.converged = true;
      break;
    }
  }
  res.coefficients = x;
  res.objective = f_prev;
  return res;
}

}  // namespace

LassoResult lasso(const CVector& y, const CMatrix& phi, double sigma2, const LassoConfig& config,
                  const CVector* warm_start) {
  if (phi.rows() != y.size()) throw std::invalid_argument("lasso: dimension mismatch");
  if (!(config.lambda >= 0.0)) throw std::invalid_argument("lasso: lambda must be >= 0");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("lasso: sigma2 must be positive");
  if (warm_start && warm_start->size() != phi.cols()) {
    throw std::invalid_argument("lasso: warm start has wrong length");
  }
  return lasso_with_step(y, phi, sigma2, config, spectral_norm_squared(phi), warm_start);
}

std::vector<double> lasso_lambda_grid(const CVector& y, const CMatrix& phi, double sigma2,
                                      std::size_t count, double lo_ratio) {
  if (count < 1) throw std::invalid_argument("lasso_lambda_grid: count must be >= 1");
  const double top = lasso_null_threshold(y, phi, sigma2);
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = top;
    return grid;
  }
  const double lo = std::log(lo_ratio);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = top * std::exp(lo * (1.0 - frac));
  }
  return grid;
}

double select_lambda(const CVector& y, const CMatrix& phi, double sigma2,
                     std::span<const double> grid, int folds, std::uint64_t seed,
                     const LassoConfig& base) {
  if (grid.empty()) throw std::invalid_argument("select_lambda: empty grid");
  if (grid.size() == 1) return grid[0];
  const Index M = y.size();
  if (folds < 2 || folds > M) throw std::invalid_argument("select_lambda: need 2 <= folds <= M");

  std::vector<Index> order(static_cast<std::size_t>(M));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold_of(static_cast<std::size_t>(M));
  for (std::size_t i = 0; i < order.size(); ++i) {
    fold_of[static_cast<std::size_t>(order[i])] =
        static_cast<int>(i % static_cast<std::size_t>(folds));
  }

  // Visit lambdas from largest to smallest so each fit warm-starts from the
  // sparser neighbouring solution.
  std::vector<std::size_t> by_lambda(grid.size());
  std::iota(by_lambda.begin(), by_lambda.end(), std::size_t{0});
  std::sort(by_lambda.begin(), by_lambda.end(),
            [&](std::size_t l, std::size_t r) { return grid[l] > grid[r]; });

  std::vector<double> cv_error(grid.size(), 0.0);
  for (int k = 0; k < folds; ++k) {
    std::vector<Index> train, test;
    for (Index m = 0; m < M; ++m) {
      (fold_of[static_cast<std::size_t>(m)] == k ? test : train).push_back(m);
    }
    if (train.empty() || test.empty()) throw std::invalid_argument("select_lambda: degenerate fold");
    CMatrix phi_train(static_cast<Index>(train.size()), phi.cols());
    CVector y_train(static_cast<Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      phi_train.row(static_cast<Index>(i)) = phi.row(train[i]);
      y_train[static_cast<Index>(i)] = y[train[i]];
    }
    const double lipschitz = spectral_norm_squared(phi_train);
    CVector warm = CVector::Zero(phi.cols());
    for (std::size_t idx : by_lambda) {
      LassoConfig cfg = base;
      cfg.lambda = grid[idx];
      if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("select_lambda: negative lambda");
      const LassoResult fit = lasso_with_step(y_train, phi_train, sigma2, cfg, lipschitz, &warm);
      warm = fit.coefficients;
      double err = 0.0;
      for (Index m : test) {
        const Complex pred = phi.row(m).transpose().cwiseProduct(fit.coefficients).sum();
        err += std::norm(y[m] - pred);
      }
      cv_error[idx] += err;
    }
  }
  std::size_t best = by_lambda.front();
  for (std::size_t idx : by_lambda) {
    if (cv_error[idx] < cv_error[best]) best = idx;
  }
  return grid[best];
}

}  // namespace bisf
