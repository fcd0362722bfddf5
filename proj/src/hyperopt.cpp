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

#include "bisf/hyperopt.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/QR>

#include "bisf/dictionary.hpp"
#include "bisf/random.hpp"

namespace bisf {

Hyperparameters ThetaVector::to_hyperparameters() const {
  Hyperparameters hp;
  hp.sigma2 = std::exp(a);
  hp.sigma_alpha2 = std::exp(b);
  hp.mu = std::exp(d);
  hp.beta = std::exp(eta);
  return hp;
}

ThetaVector ThetaVector::from_hyperparameters(const Hyperparameters& hp) {
  hp.validate();
  if (!(hp.mu > 0.0)) throw std::invalid_argument("theta: mu must be > 0 to take its log");
  if (hp.beta == Complex(0.0, 0.0)) throw std::invalid_argument("theta: beta must be nonzero");
  return {std::log(hp.sigma2), std::log(hp.sigma_alpha2), std::log(hp.mu), std::log(hp.beta)};
}

ThetaVector ThetaVector::from_vector(const Eigen::Ref<const RVector>& v) {
  if (v.size() != 5) throw std::invalid_argument("theta: expected 5 real coordinates");
  return {v[0], v[1], v[2], Complex(v[3], v[4])};
}

namespace {

// X X^H, Hermitian by construction.
CMatrix gram(const CMatrix& x) {
  CMatrix g = CMatrix::Zero(x.rows(), x.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(x);
  g.triangularView<Eigen::StrictlyUpper>() = g.adjoint().triangularView<Eigen::StrictlyUpper>();
  return g;
}

void symmetrize(CMatrix& a) { a = 0.5 * (a + a.adjoint()).eval(); }

}  // namespace

MarginalLikelihood::MarginalLikelihood(CVector y, const CMatrix& phi,
                                       const BoundaryMatrices& boundary, GramSpace space)
    : y_(std::move(y)),
      plane_waves_(phi.cols()),
      boundary_count_(boundary.boundary_count()) {
  if (phi.rows() != y_.size()) {
    throw std::invalid_argument("MarginalLikelihood: Phi rows must match measurement count");
  }
  if (boundary.plane_wave_count() != phi.cols() ||
      boundary.phi_tilde.rows() != boundary.psi.rows() ||
      boundary.phi_tilde.cols() != boundary.psi.cols()) {
    throw std::invalid_argument("MarginalLikelihood: boundary matrices do not match Phi");
  }
  phi_phi_h_ = gram(phi);
  if (space == GramSpace::kAuto) {
    space = boundary_count_ <= plane_waves_ ? GramSpace::kBoundary : GramSpace::kCoefficient;
  }
  space_ = space;
  if (boundary_count_ == 0) return;

  const CMatrix& psi = boundary.psi;
  const CMatrix& pt = boundary.phi_tilde;
  psi_energy_ = psi.squaredNorm();
  pt_energy_ = pt.squaredNorm();
  cross_trace_ = psi.cwiseProduct(pt.conjugate()).sum();
  if (space_ == GramSpace::kBoundary) {
    psi_psi_h_ = gram(psi);
    pt_pt_h_ = gram(pt);
    psi_pt_h_.noalias() = psi * pt.adjoint();
    psi_phi_h_.noalias() = psi * phi.adjoint();
    pt_phi_h_.noalias() = pt * phi.adjoint();
  } else {
    psi_ = psi;
    pt_ = pt;
    phi_ = phi;
  }
}

MarginalLikelihood::Terms MarginalLikelihood::boundary_space_terms(const Hyperparameters& hp,
                                                                   bool with_gradient) const {
  const Complex beta = hp.beta;
  const double mu = hp.mu;
  const double beta2 = std::norm(beta);

  // G = I + mu A A^H, A A^H = |b|^2 Psi Psi^H + b Psi Pt^H + b^* Pt Psi^H + Pt Pt^H.
  // Each term is exactly Hermitian, so G needs no symmetrization.
  CMatrix g = mu * (beta2 * psi_psi_h_ + pt_pt_h_ + beta * psi_pt_h_ +
                    std::conj(beta) * psi_pt_h_.adjoint());
  g.diagonal().array() += 1.0;
  const HermitianFactor g_factor(g);

  // F = A Phi^H; X = G^{-1} F = A C with C = (I + mu A^H A)^{-1} Phi^H.
  const CMatrix f = beta * psi_phi_h_ + pt_phi_h_;
  const CMatrix x = g_factor.solve(f);

  // Complex scalars keep these products on Eigen's fused GEMM path.
  Terms t;
  t.phi_c = phi_phi_h_;
  t.phi_c.noalias() -= Complex(mu) * f.adjoint() * x;
  if (with_gradient) {
    const double scale = hp.sigma_alpha2 * mu;
    t.dq_dd.noalias() = Complex(-scale) * x.adjoint() * x;
    // Psi C = Psi Phi^H - mu (Psi A^H) G^{-1} A Phi^H, Psi A^H = b^* Psi Psi^H + Psi Pt^H.
    CMatrix psi_a_h = std::conj(beta) * psi_psi_h_ + psi_pt_h_;
    CMatrix psi_c = psi_phi_h_;
    psi_c.noalias() -= Complex(mu) * psi_a_h * x;
    t.dq_deta_conj.noalias() = (-scale * std::conj(beta)) * psi_c.adjoint() * x;
  }
  return t;
}

MarginalLikelihood::Terms MarginalLikelihood::coefficient_space_terms(const Hyperparameters& hp,
                                                                      bool with_gradient) const {
  const Complex beta = hp.beta;
  const double mu = hp.mu;

  // K = I + mu A^H A = R^H R from a QR of [I; sqrt(mu) A], which avoids
  // forming A^H A and keeps the conditioning of A rather than its square.
  const Index P = plane_waves_;
  const CMatrix a = beta * psi_ + pt_;
  CMatrix stacked(P + boundary_count_, P);
  stacked.topRows(P).setIdentity();
  stacked.bottomRows(boundary_count_) = std::sqrt(mu) * a;
  const Eigen::HouseholderQR<CMatrix> qr(stacked);
  const CMatrix r = qr.matrixQR().topRows(P).triangularView<Eigen::Upper>();

  // W^H = R^{-H} Phi^H, so Phi K^{-1} Phi^H = W W^H and C = K^{-1} Phi^H = R^{-1} W^H.
  const CMatrix wh = r.adjoint().triangularView<Eigen::Lower>().solve(phi_.adjoint());
  Terms t;
  t.phi_c = gram(wh.adjoint());
  if (with_gradient) {
    const CMatrix c = r.triangularView<Eigen::Upper>().solve(wh);
    const CMatrix ac = a * c;
    const double scale = hp.sigma_alpha2 * mu;
    // dQ/dd = -s^2 mu C^H A^H A C and d(A^H A)/d eta^* = b^* Psi^H A.
    t.dq_dd = Complex(-scale) * gram(ac.adjoint());
    t.dq_deta_conj.noalias() = Complex(-scale * std::conj(beta)) * (psi_ * c).adjoint() * ac;
  }
  return t;
}

MarginalLikelihood::Terms MarginalLikelihood::terms(const Hyperparameters& hp,
                                                    bool with_gradient) const {
  if (boundary_count_ == 0) {
    Terms t;
    t.phi_c = phi_phi_h_;
    if (with_gradient) {
      t.dq_dd = CMatrix::Zero(y_.size(), y_.size());
      t.dq_deta_conj = CMatrix::Zero(y_.size(), y_.size());
    }
    return t;
  }
  return space_ == GramSpace::kBoundary ? boundary_space_terms(hp, with_gradient)
                                        : coefficient_space_terms(hp, with_gradient);
}

ObjectiveEval MarginalLikelihood::compute(const ThetaVector& theta, bool with_gradient) const {
  if (!theta.all_finite()) throw NumericalError("objective: non-finite theta");
  const Hyperparameters hp = theta.to_hyperparameters();
  if (!(hp.sigma2 > 0.0) || !(hp.sigma_alpha2 > 0.0) || !std::isfinite(hp.sigma2) ||
      !std::isfinite(hp.sigma_alpha2) || !std::isfinite(hp.mu)) {
    throw NumericalError("objective: hyperparameters out of floating-point range");
  }
  Terms t = terms(hp, with_gradient);

  CMatrix q = hp.sigma_alpha2 * t.phi_c;
  symmetrize(q);
  q.diagonal().array() += hp.sigma2;
  const HermitianFactor q_factor(q);
  const CVector xi = q_factor.solve(y_);

  ObjectiveEval out;
  out.value = 0.5 * y_.dot(xi).real() + 0.5 * q_factor.log_det();
  if (!std::isfinite(out.value)) throw NumericalError("objective: non-finite value");
  if (!with_gradient) return out;

  // dJ/dtheta_i = -1/2 tr((xi xi^H - Q^{-1}) dQ/dtheta_i).
  CMatrix w = -q_factor.inverse();
  w.noalias() += xi * xi.adjoint();
  out.gradient[0] = -0.5 * hp.sigma2 * w.trace().real();
  out.gradient[1] = -0.5 * hp.sigma_alpha2 * trace_of_product(w, t.phi_c).real();
  out.gradient[2] = -0.5 * trace_of_product(w, t.dq_dd).real();
  // J is real, so dJ/dRe = 2 Re(dJ/deta^*) and dJ/dIm = 2 Im(dJ/deta^*).
  const Complex g = -0.5 * trace_of_product(w, t.dq_deta_conj);
  out.gradient[3] = 2.0 * g.real();
  out.gradient[4] = 2.0 * g.imag();
  if (!out.gradient.allFinite()) throw NumericalError("objective: non-finite gradient");
  return out;
}

double MarginalLikelihood::mean_boundary_eigenvalue(Complex beta) const {
  if (boundary_count_ == 0 || plane_waves_ == 0) return 0.0;
  const double tr =
      std::norm(beta) * psi_energy_ + pt_energy_ + 2.0 * (beta * cross_trace_).real();
  return std::max(tr, 0.0) / static_cast<double>(plane_waves_);
}

double MarginalLikelihood::value(const ThetaVector& theta) const {
  return compute(theta, false).value;
}

ObjectiveEval MarginalLikelihood::evaluate(const ThetaVector& theta) const {
  return compute(theta, true);
}

std::optional<ObjectiveEval> MarginalLikelihood::try_evaluate(
    const ThetaVector& theta) const noexcept {
  try {
    return compute(theta, true);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

RVector finite_difference_gradient(const std::function<double(const RVector&)>& f,
                                   const RVector& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite difference step must be positive");
  RVector g(x.size());
  RVector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double fp = f(probe);
    probe[i] = x[i] - step;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

Vector5 finite_difference_gradient(const MarginalLikelihood& objective, const ThetaVector& theta,
                                   double step) {
  const auto f = [&](const RVector& v) { return objective.value(ThetaVector::from_vector(v)); };
  return finite_difference_gradient(f, RVector(theta.to_vector()), step);
}

GradientCheckReport run_gradient_check(const GradientCheckOptions& options) {
  if (options.instances < 1 || options.thetas_per_instance < 1) {
    throw std::invalid_argument("gradient check: need at least one instance and theta");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const RoomSpec room;
  const double k = wavenumber(300.0, 343.0);
  GradientCheckReport report;
  report.absolute_floor = 1e-7;
  for (int inst = 0; inst < options.instances; ++inst) {
    Rng rng(derive_seed(options.seed, 0x67726164, static_cast<std::uint64_t>(inst)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);

    std::vector<Point3> mics;
    for (Index m = 0; m < options.mics; ++m) {
      mics.emplace_back(2.5 + 2.5 * u(rng), 4.0 * u(rng), 3.0 * u(rng));
    }
    const auto dict = PlaneWaveDictionary::fibonacci(k, static_cast<std::size_t>(options.plane_waves));
    const CMatrix phi = build_phi(dict, mics);
    const BoundaryCloud cloud =
        sample_boundary(room, static_cast<std::size_t>(options.boundary_points), rng());
    const BoundaryMatrices boundary = BoundaryMatrices::build(dict, cloud);
    CVector y(options.mics);
    for (Index m = 0; m < y.size(); ++m) y[m] = Complex(g(rng), g(rng)) * 0.1;

    for (GramSpace space : {GramSpace::kBoundary, GramSpace::kCoefficient}) {
      const MarginalLikelihood objective(y, phi, boundary, space);
      Rng theta_rng(rng());
      for (int j = 0; j < options.thetas_per_instance; ++j) {
        std::uniform_real_distribution<double> ua(-6.0, -2.0), ub(-6.0, -2.0), ud(-6.0, 0.0),
            ue(-1.0, 2.0), up(-kPi, kPi);
        const ThetaVector theta{ua(theta_rng), ub(theta_rng), ud(theta_rng),
                                Complex(ue(theta_rng), up(theta_rng))};
        const Vector5 analytic = objective.evaluate(theta).gradient;
        const Vector5 fd = finite_difference_gradient(objective, theta, options.step);
        report.evaluations += 11;
        for (int i = 0; i < 5; ++i) {
          const double scale = std::max(std::abs(analytic[i]), std::abs(fd[i]));
          if (scale < report.absolute_floor) {
            ++report.skipped_components;
            continue;
          }
          report.max_relative_error =
              std::max(report.max_relative_error, std::abs(analytic[i] - fd[i]) / scale);
        }
      }
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string to_string(MinimizeStatus status) {
  switch (status) {
    case MinimizeStatus::kConverged:
      return "converged";
    case MinimizeStatus::kMaxLineSearches:
      return "max_line_searches";
    case MinimizeStatus::kLineSearchFailed:
      return "line_search_failed";
    case MinimizeStatus::kEvaluationFailed:
      return "evaluation_failed";
  }
  return "unknown";
}

MinimizeResult minimize(const DifferentiableFunction& f, const RVector& x0,
                        const MinimizeOptions& options) {
  constexpr double kInterpolationGuard = 0.1;  // stay this far inside the bracket
  constexpr double kExtrapolationLimit = 3.0;  // at most this many times the current step
  constexpr double kMaxSlopeRatio = 10.0;
  const double sig = options.curvature;
  const double rho = options.sufficient_decrease;
  const Index n = x0.size();

  std::vector<bool> fixed = options.fixed;
  fixed.resize(static_cast<std::size_t>(n), false);

  MinimizeResult res;
  res.x = x0;

  auto eval = [&](const RVector& x) -> std::optional<std::pair<double, RVector>> {
    ++res.evaluations;
    auto r = f(x);
    if (!r || !std::isfinite(r->first) || !r->second.allFinite() || r->second.size() != n) {
      return std::nullopt;
    }
    for (Index i = 0; i < n; ++i) {
      if (fixed[static_cast<std::size_t>(i)]) r->second[i] = 0.0;
    }
    return r;
  };

  auto first = eval(x0);
  if (!first) {
    res.value = std::numeric_limits<double>::quiet_NaN();
    res.status = MinimizeStatus::kEvaluationFailed;
    return res;
  }
  double f0 = first->first;
  RVector df0 = first->second;
  RVector x = x0;
  res.value = f0;
  res.accepted_values.push_back(f0);
  res.accepted_points.push_back(x);

  auto record = [&](const RVector& point, double value) {
    res.x = point;
    res.value = value;
    res.accepted_values.push_back(value);
    res.accepted_points.push_back(point);
  };

  RVector s = -df0;
  double d0 = -s.squaredNorm();
  if (d0 == 0.0) {
    res.status = MinimizeStatus::kConverged;
    return res;
  }
  double x3 = 1.0 / (1.0 - d0);
  bool previous_failed = false;
  res.status = MinimizeStatus::kMaxLineSearches;

  while (res.line_searches < options.max_line_searches) {
    ++res.line_searches;
    RVector best_x = x;
    double best_f = f0;
    RVector best_df = df0;
    int budget = options.max_evaluations_per_search;

    double x1 = 0.0, f1 = f0, d1 = d0;
    double x2 = 0.0, f2 = f0, d2 = d0;
    double f3 = f0, d3 = d0;
    RVector df3 = df0;
    double x4 = 0.0, f4 = 0.0, d4 = 0.0;
    bool have_upper = false;

    // Extrapolate until the step brackets an acceptable point.
    for (;;) {
      bool ok = false;
      while (!ok && budget > 0) {
        --budget;
        if (auto e = eval(x + x3 * s)) {
          f3 = e->first;
          df3 = e->second;
          ok = true;
        } else {
          x3 = 0.5 * (x2 + x3);
        }
      }
      if (!ok) {
        f3 = std::numeric_limits<double>::infinity();
        d3 = 0.0;
        break;
      }
      if (f3 < best_f) {
        best_x = x + x3 * s;
        best_f = f3;
        best_df = df3;
      }
      d3 = df3.dot(s);
      if (d3 > sig * d0 || f3 > f0 + x3 * rho * d0 || budget == 0) break;
      x1 = x2;
      f1 = f2;
      d1 = d2;
      x2 = x3;
      f2 = f3;
      d2 = d3;
      // Cubic extrapolation.
      const double a = 6.0 * (f1 - f2) + 3.0 * (d2 + d1) * (x2 - x1);
      const double b = 3.0 * (f2 - f1) - (2.0 * d1 + d2) * (x2 - x1);
      const double disc = b * b - a * d1 * (x2 - x1);
      double next = std::numeric_limits<double>::quiet_NaN();
      if (disc >= 0.0) next = x1 - d1 * (x2 - x1) * (x2 - x1) / (b + std::sqrt(disc));
      if (!std::isfinite(next) || next < 0.0) {
        next = x2 * kExtrapolationLimit;
      } else if (next > x2 * kExtrapolationLimit) {
        next = x2 * kExtrapolationLimit;
      } else if (next < x2 + kInterpolationGuard * (x2 - x1)) {
        next = x2 + kInterpolationGuard * (x2 - x1);
      }
      x3 = next;
    }

    // Interpolate inside [x2, x4] until the Wolfe conditions hold.
    while ((std::abs(d3) > -sig * d0 || f3 > f0 + x3 * rho * d0) && budget > 0) {
      if (d3 > 0.0 || f3 > f0 + x3 * rho * d0) {
        x4 = x3;
        f4 = f3;
        d4 = d3;
        have_upper = true;
      } else {
        x2 = x3;
        f2 = f3;
        d2 = d3;
      }
      double next;
      if (!have_upper) {
        next = x2 * kExtrapolationLimit;
        x4 = next;
      } else if (f4 > f0) {
        next = x2 - (0.5 * d2 * (x4 - x2) * (x4 - x2)) / (f4 - f2 - d2 * (x4 - x2));
      } else {
        const double a = 6.0 * (f2 - f4) / (x4 - x2) + 3.0 * (d4 + d2);
        const double b = 3.0 * (f4 - f2) - (2.0 * d2 + d4) * (x4 - x2);
        next = x2 + (std::sqrt(b * b - a * d2 * (x4 - x2) * (x4 - x2)) - b) / a;
      }
      if (!std::isfinite(next)) next = 0.5 * (x2 + x4);
      next = std::max(std::min(next, x4 - kInterpolationGuard * (x4 - x2)),
                      x2 + kInterpolationGuard * (x4 - x2));
      x3 = next;
      --budget;
      if (auto e = eval(x + x3 * s)) {
        f3 = e->first;
        df3 = e->second;
        d3 = df3.dot(s);
        if (f3 < best_f) {
          best_x = x + x3 * s;
          best_f = f3;
          best_df = df3;
        }
      } else {
        f3 = std::numeric_limits<double>::infinity();
        d3 = 0.0;
      }
    }

    if (std::abs(d3) < -sig * d0 && f3 < f0 + x3 * rho * d0) {
      const double previous = f0;
      x = x + x3 * s;
      f0 = f3;
      record(x, f0);
      // Polak-Ribiere direction.
      const double pr = (df3.squaredNorm() - df0.dot(df3)) / df0.squaredNorm();
      s = pr * s - df3;
      df0 = df3;
      const double d_prev = d0;
      d0 = df0.dot(s);
      if (d0 > 0.0) {
        s = -df0;
        d0 = -s.squaredNorm();
      }
      if (d0 == 0.0) {
        res.status = MinimizeStatus::kConverged;
        break;
      }
      x3 = x3 * std::min(kMaxSlopeRatio, d_prev / (d0 - std::numeric_limits<double>::min()));
      previous_failed = false;
      if (std::abs(previous - f0) < options.relative_tolerance * (1.0 + std::abs(f0))) {
        res.status = MinimizeStatus::kConverged;
        break;
      }
    } else {
      // Keep the best point seen during the failed search.
      if (best_f < f0) {
        x = best_x;
        f0 = best_f;
        df0 = best_df;
        record(x, f0);
      }
      if (previous_failed) {
        res.status = MinimizeStatus::kLineSearchFailed;
        break;
      }
      s = -df0;
      d0 = -s.squaredNorm();
      if (d0 == 0.0) {
        res.status = MinimizeStatus::kConverged;
        break;
      }
      x3 = 1.0 / (1.0 - d0);
      previous_failed = true;
    }
  }
  res.x = x;
  res.value = f0;
  return res;
}

ThetaVector initial_theta(const CVector& y, Index plane_waves) {
  if (plane_waves < 1) throw std::invalid_argument("initial_theta: need plane waves");
  double power = y.size() > 0 ? y.squaredNorm() / static_cast<double>(y.size()) : 1.0;
  if (!(power > 0.0)) power = 1.0;
  ThetaVector t;
  t.a = std::log(0.1 * power);
  t.b = std::log(power / static_cast<double>(plane_waves));
  t.d = 0.0;
  t.eta = Complex(0.0, 0.0);
  return t;
}

FitResult fit_hyperparameters(const MarginalLikelihood& objective, const ThetaVector& initial,
                              const MinimizeOptions& options) {
  const DifferentiableFunction f =
      [&](const RVector& v) -> std::optional<std::pair<double, RVector>> {
    auto e = objective.try_evaluate(ThetaVector::from_vector(v));
    if (!e) return std::nullopt;
    return std::make_pair(e->value, RVector(e->gradient));
  };
  FitResult out;
  out.optimizer = minimize(f, RVector(initial.to_vector()), options);
  out.theta = ThetaVector::from_vector(out.optimizer.x);
  out.value = out.optimizer.value;
  return out;
}

namespace {

// Tikhonov (a, b) with beta and mu chosen so that mu * (mean eigenvalue of
// A^H A) equals `weight`.
ThetaVector anchored_theta(const MarginalLikelihood& objective, const FitResult& tikhonov,
                           Complex eta, double weight) {
  ThetaVector t = tikhonov.theta;
  t.eta = eta;
  const double eig = objective.mean_boundary_eigenvalue(std::exp(eta));
  t.d = std::log(weight / std::max(eig, std::numeric_limits<double>::min()));
  return t;
}

}  // namespace

std::vector<ThetaVector> boundary_model_candidates(const MarginalLikelihood& objective,
                                                   const FitResult& tikhonov) {
  constexpr std::array<double, 2> kWeights{1.0, 100.0};
  constexpr std::array<double, 3> kLogMagnitudes{0.0, 2.3, 4.6};
  constexpr std::array<double, 4> kPhases{0.0, 0.5 * kPi, kPi, -0.5 * kPi};

  std::vector<ThetaVector> out;
  out.push_back(initial_theta(objective.measurements(), objective.plane_wave_count()));
  if (objective.boundary_count() == 0) return out;
  for (double lm : kLogMagnitudes) {
    for (double ph : kPhases) {
      for (double w : kWeights) out.push_back(anchored_theta(objective, tikhonov, Complex(lm, ph), w));
    }
  }
  return out;
}

FitResult fit_boundary_model(const MarginalLikelihood& objective, const FitResult& tikhonov,
                             const MinimizeOptions& options) {
  const auto candidates = boundary_model_candidates(objective, tikhonov);
  const ThetaVector* best = &candidates.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    double v = std::numeric_limits<double>::infinity();
    try {
      v = objective.value(c);
    } catch (const NumericalError&) {
      continue;
    }
    if (v < best_value) {
      best_value = v;
      best = &c;
    }
  }
  FitResult fit = fit_hyperparameters(objective, *best, options);
  fit.optimizer.evaluations += static_cast<int>(candidates.size());
  if (objective.boundary_count() == 0) return fit;

  // The Tikhonov optimum with a negligible boundary term is kept only as a
  // fallback. Starting CG there stalls, since the gradient in d and eta
  // vanishes as mu -> 0.
  constexpr double kNegligibleWeight = 1e-6;
  const ThetaVector nested = anchored_theta(objective, tikhonov, Complex(0.0, 0.0), kNegligibleWeight);
  ++fit.optimizer.evaluations;
  try {
    const double v = objective.value(nested);
    if (v < fit.value) {
      fit.theta = nested;
      fit.value = v;
      fit.optimizer.x = nested.to_vector();
      fit.optimizer.value = v;
    }
  } catch (const NumericalError&) {
  }
  return fit;
}

FitResult fit_tikhonov_hyperparameters(const CVector& y, const CMatrix& phi,
                                       const MinimizeOptions& options) {
  const MarginalLikelihood objective(y, phi, BoundaryMatrices::empty(phi.cols()));
  MinimizeOptions opts = options;
  opts.fixed = {false, false, true, true, true};
  return fit_hyperparameters(objective, initial_theta(y, phi.cols()), opts);
}

}  // namespace bisf
