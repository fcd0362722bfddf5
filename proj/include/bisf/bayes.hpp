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

#include <memory>
#include <span>

#include "bisf/dictionary.hpp"
#include "bisf/geometry.hpp"
#include "bisf/linalg.hpp"
#include "bisf/types.hpp"

namespace bisf {

struct Hyperparameters {
  double sigma2 = 1.0;        // noise variance
  double sigma_alpha2 = 1.0;  // prior scale
  double mu = 0.0;            // boundary weight
  Complex beta{1.0, 0.0};     // specific impedance, shared by all boundary points

  void validate() const;
};

/// Psi (normal derivatives) and Phi-tilde (i k times the atoms) evaluated on
/// the boundary cloud; both B x P.
struct BoundaryMatrices {
  CMatrix psi;
  CMatrix phi_tilde;

  static BoundaryMatrices build(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud);
  static BoundaryMatrices empty(Index plane_waves);

  Index boundary_count() const { return psi.rows(); }
  Index plane_wave_count() const { return psi.cols(); }
  /// beta Psi + Phi-tilde: the impedance condition applied to coefficients.
  CMatrix impedance_operator(Complex beta) const { return beta * psi + phi_tilde; }
};

/// Sigma_alpha = sigma_alpha^2 (I + mu A^H A)^{-1}, A = beta Psi + Phi-tilde.
/// Keeps the precision-shaped matrix I + mu A^H A and its factorization;
/// the covariance itself is formed explicitly and symmetrized.
struct PriorCovariance {
  double sigma_alpha2 = 1.0;
  CMatrix precision;   // I + mu A^H A (unscaled)
  HermitianFactor precision_factor;
  CMatrix covariance;  // sigma_alpha^2 * precision^{-1}

  Index size() const { return covariance.rows(); }
};

PriorCovariance build_sigma_alpha(const BoundaryMatrices& boundary, const Hyperparameters& hp);
PriorCovariance build_sigma_alpha(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud,
                                  const Hyperparameters& hp);

struct Prediction {
  CVector mean;
  RVector variance;
};

/// Conditioned Gaussian model for one set of measurements. Immutable.
class PosteriorModel {
 public:
  PosteriorModel(CVector y, CMatrix phi, std::shared_ptr<const PriorCovariance> prior,
                 const Hyperparameters& hp);

  const Hyperparameters& hyperparameters() const { return hp_; }
  const PriorCovariance& prior() const { return *prior_; }
  const CMatrix& phi() const { return phi_; }
  const CVector& measurements() const { return y_; }
  /// Q = sigma^2 I + Phi Sigma Phi^H.
  const CMatrix& q() const { return q_; }
  const HermitianFactor& q_factor() const { return q_factor_; }
  /// xi = Q^{-1} y.
  const CVector& xi() const { return xi_; }
  /// Sigma Phi^H, P x M.
  const CMatrix& sigma_phi_h() const { return sigma_phi_h_; }

  /// 1/2 y^H Q^{-1} y + 1/2 log|Q|.
  double negative_log_marginal_likelihood() const;

 private:
  Hyperparameters hp_;
  CVector y_;
  CMatrix phi_;
  std::shared_ptr<const PriorCovariance> prior_;
  CMatrix sigma_phi_h_;
  CMatrix q_;
  HermitianFactor q_factor_;
  CVector xi_;
};

PosteriorModel build_posterior(const CVector& y, const CMatrix& phi,
                               std::shared_ptr<const PriorCovariance> prior,
                               const Hyperparameters& hp);

/// Convenience: prior + posterior in one step.
PosteriorModel build_posterior(const CVector& y, const CMatrix& phi,
                               const BoundaryMatrices& boundary, const Hyperparameters& hp);

/// alpha_MAP through the M x M system: Sigma Phi^H Q^{-1} y.
CVector map_coefficients(const PosteriorModel& posterior);

/// alpha_MAP through the P x P system:
/// sigma^{-2} (sigma^{-2} Phi^H Phi + Sigma^{-1})^{-1} Phi^H y.
CVector map_coefficients_primal(const PosteriorModel& posterior);

/// Predictive mean phi(r)^T alpha_MAP and variance
/// phi^T Sigma phi^* - (Phi Sigma phi^*)^H Q^{-1} (Phi Sigma phi^*) at the
/// points whose atom rows are given (N x P).
Prediction predict(const PosteriorModel& posterior, const CMatrix& phi_query);
Prediction predict(const PosteriorModel& posterior, const PlaneWaveDictionary& dict,
                   std::span<const Point3> points);

}  // namespace bisf
