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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bisf/bayes.hpp"
#include "bisf/types.hpp"

namespace bisf {

using Vector5 = Eigen::Matrix<double, 5, 1>;

/// Unconstrained hyperparameters: sigma^2 = e^a, sigma_alpha^2 = e^b,
/// mu = e^d, beta = e^eta. As a real vector: (a, b, d, Re eta, Im eta).
struct ThetaVector {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  Complex eta{0.0, 0.0};

  Hyperparameters to_hyperparameters() const;
  /// Requires mu > 0 and beta != 0.
  static ThetaVector from_hyperparameters(const Hyperparameters& hp);

  Vector5 to_vector() const { return {a, b, d, eta.real(), eta.imag()}; }
  static ThetaVector from_vector(const Eigen::Ref<const RVector>& v);
  bool all_finite() const { return to_vector().allFinite(); }
};

struct ObjectiveEval {
  double value = 0.0;
  /// dJ/da, dJ/db, dJ/dd, dJ/dRe(eta), dJ/dIm(eta).
  Vector5 gradient = Vector5::Zero();
};

/// Which dense system carries the boundary term. Both give the same J and
/// gradient; kBoundary factors a B x B matrix, kCoefficient a P x P one.
enum class GramSpace { kAuto, kBoundary, kCoefficient };

/// Negative log marginal likelihood J = 1/2 y^H Q^{-1} y + 1/2 log|Q| with
/// Q = sigma^2 I + Phi Sigma_alpha Phi^H, as a function of theta.
///
/// Cross products of Phi, Psi and Phi-tilde are formed once at
/// construction so that each evaluation costs one Hermitian factorization
/// of size min(B, P) plus one of size M.
class MarginalLikelihood {
 public:
  MarginalLikelihood(CVector y, const CMatrix& phi, const BoundaryMatrices& boundary,
                     GramSpace space = GramSpace::kAuto);

  Index measurement_count() const { return y_.size(); }
  Index plane_wave_count() const { return plane_waves_; }
  Index boundary_count() const { return boundary_count_; }
  GramSpace space() const { return space_; }
  const CVector& measurements() const { return y_; }
  /// tr(A A^H) / P for the given beta: the mean eigenvalue of A^H A.
  double mean_boundary_eigenvalue(Complex beta) const;

  double value(const ThetaVector& theta) const;
  ObjectiveEval evaluate(const ThetaVector& theta) const;
  /// Non-throwing variant; nullopt when Q cannot be factorized or J is not finite.
  std::optional<ObjectiveEval> try_evaluate(const ThetaVector& theta) const noexcept;

 private:
  struct Terms {
    CMatrix phi_c;          // Phi (I + mu A^H A)^{-1} Phi^H
    CMatrix dq_dd;          // dQ/dd
    CMatrix dq_deta_conj;   // dQ/d(eta^*)
  };
  Terms terms(const Hyperparameters& hp, bool with_gradient) const;
  Terms boundary_space_terms(const Hyperparameters& hp, bool with_gradient) const;
  Terms coefficient_space_terms(const Hyperparameters& hp, bool with_gradient) const;
  ObjectiveEval compute(const ThetaVector& theta, bool with_gradient) const;

  CVector y_;
  Index plane_waves_ = 0;
  Index boundary_count_ = 0;
  GramSpace space_ = GramSpace::kBoundary;
  CMatrix phi_phi_h_;  // M x M
  double psi_energy_ = 0.0;  // ||Psi||_F^2
  double pt_energy_ = 0.0;   // ||Phi-tilde||_F^2
  Complex cross_trace_{};    // tr(Psi Phi-tilde^H)

  // kBoundary
  CMatrix psi_psi_h_;  // B x B
  CMatrix psi_pt_h_;   // Psi Phi-tilde^H
  CMatrix pt_pt_h_;
  CMatrix psi_phi_h_;  // B x M
  CMatrix pt_phi_h_;

  // kCoefficient
  CMatrix psi_;        // B x P
  CMatrix pt_;         // B x P
  CMatrix phi_;        // M x P
};

/// Central differences of a scalar function, one coordinate at a time.
RVector finite_difference_gradient(const std::function<double(const RVector&)>& f,
                                   const RVector& x, double step);

/// Central differences of J over (a, b, d, Re eta, Im eta). Throws
/// NumericalError if J cannot be evaluated at any probe point.
Vector5 finite_difference_gradient(const MarginalLikelihood& objective, const ThetaVector& theta,
                                   double step);

/// Random-instance comparison of analytic and central-difference gradients.
struct GradientCheckOptions {
  int instances = 20;
  int thetas_per_instance = 5;
  Index mics = 20;
  Index plane_waves = 50;
  Index boundary_points = 30;
  double step = 3e-5;  // near eps^(1/3) |theta|; smaller steps are round-off limited
  std::uint64_t seed = 1;
};

struct GradientCheckReport {
  /// Largest |analytic - fd| / max(|analytic|, |fd|) over every component;
  /// components where both are below `absolute_floor` are skipped.
  double max_relative_error = 0.0;
  double absolute_floor = 0.0;
  int evaluations = 0;
  int skipped_components = 0;
  double seconds = 0.0;
};

/// Instances use a 5 x 4 x 3 m room at 300 Hz with random microphones,
/// a random boundary cloud and complex Gaussian data; theta is drawn from a
/// box around typical fitted values. Both Gram routes are checked.
GradientCheckReport run_gradient_check(const GradientCheckOptions& options);

/// Line-search settings follow the Polak-Ribiere minimizer with
/// cubic/quadratic interpolation and extrapolation.
struct MinimizeOptions {
  int max_line_searches = 100;
  double sufficient_decrease = 1e-4;  // c1
  double curvature = 0.1;             // c2
  double relative_tolerance = 1e-9;   // stop when |dJ| < tol (1 + |J|)
  int max_evaluations_per_search = 20;
  /// Coordinates flagged true keep their initial value.
  std::vector<bool> fixed;
};

enum class MinimizeStatus {
  kConverged,
  kMaxLineSearches,
  kLineSearchFailed,   // no descent possible along steepest descent either
  kEvaluationFailed,   // objective not evaluable at the initial point
};

std::string to_string(MinimizeStatus status);

struct MinimizeResult {
  RVector x;
  double value = 0.0;
  MinimizeStatus status = MinimizeStatus::kConverged;
  /// Initial value followed by the value after every accepted line search.
  std::vector<double> accepted_values;
  std::vector<RVector> accepted_points;
  int evaluations = 0;
  int line_searches = 0;
};

/// Function value and gradient, or nullopt when not evaluable there.
using DifferentiableFunction =
    std::function<std::optional<std::pair<double, RVector>>(const RVector&)>;

/// Nonlinear conjugate gradients with Polak-Ribiere directions. Falls back
/// to steepest descent when the PR direction is not a descent direction and
/// stops after a steepest-descent search also fails. Returns the best point.
MinimizeResult minimize(const DifferentiableFunction& f, const RVector& x0,
                        const MinimizeOptions& options);

/// Data-scaled start: sigma^2 = 0.1 mean|y|^2, sigma_alpha^2 = mean|y|^2 / P
/// (prior predictive power equal to the signal power), mu = 1, beta = 1.
ThetaVector initial_theta(const CVector& y, Index plane_waves);

struct FitResult {
  ThetaVector theta;
  double value = 0.0;
  MinimizeResult optimizer;
};

/// Minimizes J over theta starting from `initial`.
FitResult fit_hyperparameters(const MarginalLikelihood& objective, const ThetaVector& initial,
                              const MinimizeOptions& options);

/// Starting points screened by fit_boundary_model: the data-scaled start
/// and a grid over |beta|, arg beta and mu anchored at the Tikhonov (a, b).
std::vector<ThetaVector> boundary_model_candidates(const MarginalLikelihood& objective,
                                                   const FitResult& tikhonov);

/// Fit used for the boundary-informed reconstruction: J is evaluated at every
/// candidate and the minimizer runs from the best one. The Tikhonov optimum
/// with a negligible boundary term is returned instead if its J is lower.
FitResult fit_boundary_model(const MarginalLikelihood& objective, const FitResult& tikhonov,
                             const MinimizeOptions& options);

/// Tikhonov fit: only (a, b) move; the boundary term is dropped.
FitResult fit_tikhonov_hyperparameters(const CVector& y, const CMatrix& phi,
                                       const MinimizeOptions& options);

}  // namespace bisf
