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

#include "bisf/bayes.hpp"

#include <stdexcept>

namespace bisf {

void Hyperparameters::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("hyperparameters: sigma2 must be positive");
  }
  if (!(sigma_alpha2 > 0.0) || !std::isfinite(sigma_alpha2)) {
    throw std::invalid_argument("hyperparameters: sigma_alpha2 must be positive");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("hyperparameters: mu must be non-negative");
  }
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
    throw std::invalid_argument("hyperparameters: beta must be finite");
  }
}

BoundaryMatrices BoundaryMatrices::build(const PlaneWaveDictionary& dict,
                                         const BoundaryCloud& cloud) {
  if (cloud.empty()) return empty(dict.size());
  return {build_psi(dict, cloud), build_phi_tilde(dict, cloud)};
}

BoundaryMatrices BoundaryMatrices::empty(Index plane_waves) {
  return {CMatrix(0, plane_waves), CMatrix(0, plane_waves)};
}

PriorCovariance build_sigma_alpha(const BoundaryMatrices& boundary, const Hyperparameters& hp) {
  hp.validate();
  const Index P = boundary.plane_wave_count();
  PriorCovariance prior;
  prior.sigma_alpha2 = hp.sigma_alpha2;
  prior.precision = CMatrix::Identity(P, P);
  if (boundary.boundary_count() > 0 && hp.mu > 0.0) {
    const CMatrix a = boundary.impedance_operator(hp.beta);
    prior.precision.selfadjointView<Eigen::Lower>().rankUpdate(a.adjoint(), hp.mu);
    prior.precision.triangularView<Eigen::StrictlyUpper>() =
        prior.precision.adjoint().triangularView<Eigen::StrictlyUpper>();
  }
  prior.precision_factor = HermitianFactor(prior.precision);
  CMatrix cov = prior.precision_factor.inverse();
  prior.covariance = hp.sigma_alpha2 * 0.5 * (cov + cov.adjoint());
  return prior;
}

PriorCovariance build_sigma_alpha(const PlaneWaveDictionary& dict, const BoundaryCloud& cloud,
                                  const Hyperparameters& hp) {
  return build_sigma_alpha(BoundaryMatrices::build(dict, cloud), hp);
}

PosteriorModel::PosteriorModel(CVector y, CMatrix phi,
                               std::shared_ptr<const PriorCovariance> prior,
                               const Hyperparameters& hp)
    : hp_(hp), y_(std::move(y)), phi_(std::move(phi)), prior_(std::move(prior)) {
  hp_.validate();
  if (!prior_) throw std::invalid_argument("build_posterior: missing prior");
  if (phi_.rows() != y_.size()) {
    throw std::invalid_argument("build_posterior: Phi rows must match measurement count");
  }
  if (phi_.cols() != prior_->size()) {
    throw std::invalid_argument("build_posterior: Phi columns must match prior dimension");
  }
  const Index M = y_.size();
  sigma_phi_h_ = prior_->covariance * phi_.adjoint();
  q_ = phi_ * sigma_phi_h_;
  q_ = 0.5 * (q_ + q_.adjoint()).eval();
  q_.diagonal().array() += hp_.sigma2;
  q_factor_ = HermitianFactor(q_);
  xi_ = M > 0 ? CVector(q_factor_.solve(y_)) : CVector(0);
}

double PosteriorModel::negative_log_marginal_likelihood() const {
  return 0.5 * y_.dot(xi_).real() + 0.5 * q_factor_.log_det();
}

PosteriorModel build_posterior(const CVector& y, const CMatrix& phi,
                               std::shared_ptr<const PriorCovariance> prior,
                               const Hyperparameters& hp) {
  return PosteriorModel(y, phi, std::move(prior), hp);
}

PosteriorModel build_posterior(const CVector& y, const CMatrix& phi,
                               const BoundaryMatrices& boundary, const Hyperparameters& hp) {
  auto prior = std::make_shared<const PriorCovariance>(build_sigma_alpha(boundary, hp));
  return PosteriorModel(y, phi, std::move(prior), hp);
}

CVector map_coefficients(const PosteriorModel& posterior) {
  return posterior.sigma_phi_h() * posterior.xi();
}

CVector map_coefficients_primal(const PosteriorModel& posterior) {
  const auto& hp = posterior.hyperparameters();
  const auto& phi = posterior.phi();
  const double inv_s2 = 1.0 / hp.sigma2;
  // Sigma^{-1} = precision / sigma_alpha^2.
  CMatrix lhs = posterior.prior().precision / hp.sigma_alpha2;
  lhs.noalias() += inv_s2 * phi.adjoint() * phi;
  const HermitianFactor f(lhs);
  return inv_s2 * f.solve(CVector(phi.adjoint() * posterior.measurements()));
}

Prediction predict(const PosteriorModel& posterior, const CMatrix& phi_query) {
  const auto& prior = posterior.prior();
  if (phi_query.cols() != prior.size()) {
    throw std::invalid_argument("predict: query rows must have one entry per plane wave");
  }
  Prediction out;
  out.mean = phi_query * map_coefficients(posterior);

  const Index n = phi_query.rows();
  // Columns: Sigma phi(r_j)^*.
  const CMatrix sigma_phi = prior.covariance * phi_query.adjoint();
  const CMatrix w = posterior.phi() * sigma_phi;
  const CMatrix qinv_w = posterior.phi().rows() > 0 ? CMatrix(posterior.q_factor().solve(w))
                                                    : CMatrix(0, n);
  out.variance.resize(n);
  for (Index j = 0; j < n; ++j) {
    // phi^T (Sigma phi^*), no conjugation on the row.
    const double prior_var =
        phi_query.row(j).transpose().cwiseProduct(sigma_phi.col(j)).sum().real();
    const double reduction = w.col(j).dot(qinv_w.col(j)).real();
    double var = prior_var - reduction;
    if (var < 0.0) {
      if (-var > 1e-8 * std::abs(prior_var)) {
        throw NumericalError("predict: predictive variance significantly negative");
      }
      var = 0.0;
    }
    out.variance[j] = var;
  }
  return out;
}

Prediction predict(const PosteriorModel& posterior, const PlaneWaveDictionary& dict,
                   std::span<const Point3> points) {
  return predict(posterior, build_phi(dict, points));
}

}  // namespace bisf
