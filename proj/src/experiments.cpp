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

#include "bisf/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <stdexcept>

#include "bisf/baselines.hpp"
#include "bisf/bayes.hpp"
#include "bisf/dictionary.hpp"
#include "bisf/random.hpp"

namespace bisf {

std::string to_string(Method m) {
  switch (m) {
    case Method::kNearest:
      return "nearest";
    case Method::kTikhonov:
      return "tikhonov";
    case Method::kLasso:
      return "lasso";
    case Method::kProposed:
      return "proposed";
  }
  return "unknown";
}

std::string to_string(SweepKind s) {
  switch (s) {
    case SweepKind::kBoundaryCount:
      return "boundary_count";
    case SweepKind::kBoundaryPerturbation:
      return "boundary_perturbation";
    case SweepKind::kMicPerturbation:
      return "mic_perturbation";
    case SweepKind::kFrequency:
      return "frequency";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::kNearest, Method::kTikhonov, Method::kLasso, Method::kProposed}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

SweepKind sweep_from_string(const std::string& name) {
  for (SweepKind s : {SweepKind::kBoundaryCount, SweepKind::kBoundaryPerturbation,
                      SweepKind::kMicPerturbation, SweepKind::kFrequency}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown sweep '" + name + "'");
}

void ExperimentConfig::validate() const {
  try {
    room.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("room: ") + e.what());
  }
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(max_order >= 0, "max_order must be >= 0");
  require(sound_speed > 0.0, "sound_speed must be positive");
  require(!std::isnan(snr_db), "snr_db must be a number");
  require(mic_count >= 1, "mic_count must be >= 1");
  require(validation_count >= 1, "validation_count must be >= 1");
  require(validation_radius > 0.0, "validation_radius must be positive");
  require(plane_waves >= 1, "plane_waves must be >= 1");
  require(frequency > 0.0, "frequency must be positive");
  require(monte_carlo_runs >= 1, "monte_carlo_runs must be >= 1");
  require(!methods.empty(), "methods must not be empty");
  require(!boundary_counts.empty(), "boundary_counts must not be empty");
  require(!boundary_perturbations.empty(), "boundary_perturbations must not be empty");
  require(!mic_perturbations.empty(), "mic_perturbations must not be empty");
  require(!frequencies.empty(), "frequencies must not be empty");
  for (double f : frequencies) require(f > 0.0, "frequencies must be positive");
  for (double m : boundary_perturbations) require(m >= 0.0, "perturbations must be >= 0");
  for (double m : mic_perturbations) require(m >= 0.0, "perturbations must be >= 0");
  require(optimizer.max_line_searches >= 0, "optimizer.max_line_searches must be >= 0");
  require(lasso.grid_points >= 1, "lasso.grid_points must be >= 1");
  require(lasso.folds >= 2 && static_cast<std::size_t>(lasso.folds) <= mic_count,
          "lasso.folds must lie in [2, mic_count]");
  require(lasso.grid_low_ratio > 0.0 && lasso.grid_low_ratio <= 1.0,
          "lasso.grid_low_ratio must lie in (0, 1]");
  if (lasso.fixed_lambda_ratio) {
    require(*lasso.fixed_lambda_ratio >= 0.0, "lasso.fixed_lambda_ratio must be >= 0");
  }
}

Point3 ExperimentConfig::validation_center() const { return microphone_region(room).centroid(); }

double nmse(const CMatrix& predictions, const CMatrix& truth, std::size_t* excluded) {
  if (predictions.rows() != truth.rows() || predictions.cols() != truth.cols()) {
    throw std::invalid_argument("nmse: shape mismatch");
  }
  double acc = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
  for (Index n = 0; n < truth.cols(); ++n) {
    for (Index j = 0; j < truth.rows(); ++j) {
      const double ref = std::norm(truth(j, n));
      if (std::sqrt(ref) < 1e-15) {
        ++skipped;
        continue;
      }
      acc += std::norm(truth(j, n) - predictions(j, n)) / ref;
      ++used;
    }
  }
  if (excluded) {
    *excluded = skipped;
  } else if (skipped > 0) {
    std::cerr << "warning: nmse skipped " << skipped << " near-zero reference values\n";
  }
  if (used == 0) throw std::invalid_argument("nmse: no usable reference values");
  return acc / static_cast<double>(used);
}

std::uint64_t trial_seed(std::uint64_t master, SeedStream stream, int run) {
  return derive_seed(master, static_cast<std::uint64_t>(stream), static_cast<std::uint64_t>(run));
}

Scenario::Scenario(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  images_ = enumerate_images(config_.room, config_.max_order);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool has_method(const std::vector<Method>& methods, Method m) {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

double trial_nmse(const CVector& prediction, const CVector& truth) {
  return nmse(prediction, truth);
}

}  // namespace

TrialData Scenario::trial_data(const TrialSpec& spec) const {
  const auto& cfg = config_;
  const std::uint64_t master = cfg.seed;
  const Point3 center = cfg.validation_center();
  const double k = wavenumber(spec.frequency, cfg.sound_speed);
  TrialData d{{}, {}, {}, {}, {}, {}, PlaneWaveDictionary::fibonacci(k, cfg.plane_waves), {}, {}};
  d.mics = sample_microphones(cfg.room, cfg.mic_count, center, cfg.validation_radius,
                              trial_seed(master, SeedStream::kMicrophones, spec.run));
  d.validation =
      sample_validation_points(cfg.room, cfg.validation_count, center, cfg.validation_radius,
                               trial_seed(master, SeedStream::kValidation, spec.run));

  // Ground truth at the true positions.
  d.snapshot = simulate_snapshot(images_, d.mics, spec.frequency, cfg.sound_speed, cfg.snr_db,
                                 trial_seed(master, SeedStream::kNoise, spec.run));
  d.truth = transfer_functions(images_, d.validation.positions, k);

  // Geometry as assumed by the reconstruction.
  d.assumed = d.mics;
  if (spec.mic_perturbation > 0.0) {
    d.assumed.positions =
        perturb_positions(d.mics.positions, spec.mic_perturbation,
                          trial_seed(master, SeedStream::kMicPerturbation, spec.run),
                          cfg.perturbation_mode);
  }
  if (spec.boundary_count > 0) {
    d.cloud = sample_boundary(cfg.room, spec.boundary_count,
                              trial_seed(master, SeedStream::kBoundary, spec.run));
    if (spec.boundary_perturbation > 0.0) {
      d.cloud.points = perturb_positions(
          d.cloud.points, spec.boundary_perturbation,
          trial_seed(master, SeedStream::kBoundaryPerturbation, spec.run),
          cfg.perturbation_mode);
    }
  }
  d.phi = build_phi(d.dictionary, d.assumed.positions);
  d.phi_validation = build_phi(d.dictionary, d.validation.positions);
  return d;
}

TrialOutcome Scenario::run_trial(const TrialSpec& spec) const {
  const auto& cfg = config_;
  const std::uint64_t master = cfg.seed;
  TrialOutcome out;
  out.spec = spec;
  const TrialData data = trial_data(spec);
  const CVector& y = data.snapshot.noisy;
  const CMatrix& phi = data.phi;
  const CMatrix& phi_val = data.phi_validation;
  const CVector& truth = data.truth;

  const bool need_tikhonov_fit =
      has_method(cfg.methods, Method::kTikhonov) || has_method(cfg.methods, Method::kLasso) ||
      has_method(cfg.methods, Method::kProposed);
  double tikhonov_seconds = 0.0;
  if (need_tikhonov_fit) {
    const auto t0 = Clock::now();
    out.tikhonov_fit = fit_tikhonov_hyperparameters(y, phi, cfg.optimizer);
    tikhonov_seconds = seconds_since(t0);
  }

  for (Method m : cfg.methods) {
    MethodOutcome mo;
    mo.method = m;
    const auto t0 = Clock::now();
    try {
      CVector prediction;
      switch (m) {
        case Method::kNearest:
          prediction = nearest_neighbor(data.assumed, y, data.validation.positions);
          break;
        case Method::kTikhonov: {
          const Hyperparameters hp = out.tikhonov_fit->theta.to_hyperparameters();
          prediction = phi_val * tikhonov(y, phi, hp.sigma2, hp.sigma_alpha2);
          break;
        }
        case Method::kLasso: {
          const double sigma2 = out.tikhonov_fit->theta.to_hyperparameters().sigma2;
          LassoConfig lc;
          lc.max_iterations = cfg.lasso.max_iterations;
          lc.tolerance = cfg.lasso.tolerance;
          if (cfg.lasso.fixed_lambda_ratio) {
            lc.lambda = *cfg.lasso.fixed_lambda_ratio * lasso_null_threshold(y, phi, sigma2);
          } else {
            const auto grid = lasso_lambda_grid(y, phi, sigma2, cfg.lasso.grid_points,
                                                cfg.lasso.grid_low_ratio);
            lc.lambda = select_lambda(y, phi, sigma2, grid, cfg.lasso.folds,
                                      trial_seed(master, SeedStream::kCrossValidation, spec.run),
                                      lc);
          }
          out.lasso_lambda = lc.lambda;
          prediction = phi_val * lasso(y, phi, sigma2, lc).coefficients;
          break;
        }
        case Method::kProposed: {
          const BoundaryMatrices boundary = BoundaryMatrices::build(data.dictionary, data.cloud);
          const MarginalLikelihood objective(y, phi, boundary);
          out.proposed_fit = fit_boundary_model(objective, *out.tikhonov_fit, cfg.optimizer);
          const Hyperparameters hp = out.proposed_fit->theta.to_hyperparameters();
          const PosteriorModel posterior = build_posterior(y, phi, boundary, hp);
          prediction = phi_val * map_coefficients(posterior);
          break;
        }
      }
      mo.nmse = trial_nmse(prediction, truth);
    } catch (const std::exception& e) {
      mo.error = e.what();
      mo.nmse = std::numeric_limits<double>::quiet_NaN();
    }
    mo.seconds = seconds_since(t0);
    if (m == Method::kTikhonov) mo.seconds += tikhonov_seconds;
    out.methods.push_back(std::move(mo));
  }
  return out;
}

std::vector<TrialSpec> sweep_trials(const ExperimentConfig& config, SweepKind sweep) {
  std::vector<double> values;
  switch (sweep) {
    case SweepKind::kBoundaryCount:
      for (auto b : config.boundary_counts) values.push_back(static_cast<double>(b));
      break;
    case SweepKind::kBoundaryPerturbation:
      values = config.boundary_perturbations;
      break;
    case SweepKind::kMicPerturbation:
      values = config.mic_perturbations;
      break;
    case SweepKind::kFrequency:
      values = config.frequencies;
      break;
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<TrialSpec> specs;
  for (double v : values) {
    for (int run = 0; run < config.monte_carlo_runs; ++run) {
      TrialSpec s;
      s.sweep = sweep;
      s.value = v;
      s.run = run;
      s.frequency = config.frequency;
      s.boundary_count = config.boundary_count;
      switch (sweep) {
        case SweepKind::kBoundaryCount:
          s.boundary_count = static_cast<std::size_t>(v);
          break;
        case SweepKind::kBoundaryPerturbation:
          s.boundary_perturbation = v;
          break;
        case SweepKind::kMicPerturbation:
          s.mic_perturbation = v;
          break;
        case SweepKind::kFrequency:
          s.frequency = v;
          break;
      }
      specs.push_back(s);
    }
  }
  return specs;
}

std::vector<RunResult> aggregate(SweepKind sweep, const std::vector<TrialOutcome>& trials,
                                 const std::vector<Method>& methods) {
  std::map<std::pair<double, int>, RunResult> groups;
  for (const auto& t : trials) {
    for (const auto& mo : t.methods) {
      const int method_rank = static_cast<int>(
          std::find(methods.begin(), methods.end(), mo.method) - methods.begin());
      auto& r = groups[{t.spec.value, method_rank}];
      r.sweep = sweep;
      r.method = mo.method;
      r.value = t.spec.value;
      r.per_run.push_back(mo.nmse);
      r.per_run_seconds.push_back(mo.seconds);
      r.seconds += mo.seconds;
      if (!mo.error.empty() || !std::isfinite(mo.nmse)) ++r.failed_runs;
    }
  }
  std::vector<RunResult> out;
  for (auto& [key, r] : groups) {
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;
    for (double v : r.per_run) {
      if (!std::isfinite(v)) continue;
      sum += v;
      sum_sq += v * v;
      ++n;
    }
    if (n > 0) {
      r.nmse_linear = sum / n;
      const double var = n > 1 ? std::max(0.0, (sum_sq - n * r.nmse_linear * r.nmse_linear) / (n - 1))
                               : 0.0;
      r.nmse_stderr = std::sqrt(var / n);
    } else {
      r.nmse_linear = std::numeric_limits<double>::quiet_NaN();
    }
    r.nmse_db = to_db(r.nmse_linear);
    out.push_back(std::move(r));
  }
  return out;
}

TrialCache::Key TrialCache::key(const TrialSpec& spec) {
  return {spec.frequency, spec.boundary_count, spec.boundary_perturbation, spec.mic_perturbation,
          spec.run};
}

std::optional<TrialOutcome> TrialCache::find(const TrialSpec& spec,
                                             const std::vector<Method>& methods) const {
  const std::lock_guard<std::mutex> lock(mutex_);
  const auto it = entries_.find(key(spec));
  if (it == entries_.end()) return std::nullopt;
  TrialOutcome out = it->second;
  out.spec = spec;
  out.methods.clear();
  for (Method m : methods) {
    const auto& have = it->second.methods;
    const auto mo = std::find_if(have.begin(), have.end(),
                                 [m](const MethodOutcome& o) { return o.method == m; });
    if (mo == have.end()) return std::nullopt;
    out.methods.push_back(*mo);
  }
  if (!has_method(methods, Method::kProposed)) out.proposed_fit.reset();
  if (!has_method(methods, Method::kLasso)) out.lasso_lambda.reset();
  return out;
}

void TrialCache::insert(const TrialOutcome& outcome) {
  const std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = entries_.try_emplace(key(outcome.spec), outcome);
  if (inserted) return;
  // Merge methods missing from the stored outcome.
  for (const auto& mo : outcome.methods) {
    auto& have = it->second.methods;
    if (std::none_of(have.begin(), have.end(),
                     [&](const MethodOutcome& o) { return o.method == mo.method; })) {
      have.push_back(mo);
    }
  }
  if (!it->second.proposed_fit) it->second.proposed_fit = outcome.proposed_fit;
  if (!it->second.tikhonov_fit) it->second.tikhonov_fit = outcome.tikhonov_fit;
  if (!it->second.lasso_lambda) it->second.lasso_lambda = outcome.lasso_lambda;
}

std::size_t TrialCache::size() const {
  const std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

SweepOutput run_sweep(const ExperimentConfig& config, SweepKind sweep, TrialCache* cache) {
  const Scenario scenario(config);
  const auto specs = sweep_trials(config, sweep);
  std::vector<TrialOutcome> trials(specs.size());
  const auto count = static_cast<std::ptrdiff_t>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (cache) {
      if (auto hit = cache->find(specs[idx], config.methods)) {
        trials[idx] = std::move(*hit);
        continue;
      }
    }
    try {
      trials[idx] = scenario.run_trial(specs[idx]);
      if (cache) cache->insert(trials[idx]);
    } catch (const std::exception& e) {
      TrialOutcome failed;
      failed.spec = specs[idx];
      for (Method m : config.methods) {
        failed.methods.push_back(
            {m, std::numeric_limits<double>::quiet_NaN(), 0.0, std::string(e.what())});
      }
      trials[idx] = std::move(failed);
    }
  }
  SweepOutput out;
  out.sweep = sweep;
  out.results = aggregate(sweep, trials, config.methods);
  out.trials = std::move(trials);
  return out;
}

Reconstruction reconstruct_field(const CVector& y, const CMatrix& phi,
                                 const BoundaryMatrices& boundary, const CMatrix& phi_query,
                                 const MinimizeOptions& options) {
  Reconstruction r;
  r.tikhonov_fit = fit_tikhonov_hyperparameters(y, phi, options);
  if (boundary.boundary_count() == 0) {
    r.fit = r.tikhonov_fit;
  } else {
    const MarginalLikelihood objective(y, phi, boundary);
    r.fit = fit_boundary_model(objective, r.tikhonov_fit, options);
  }
  const PosteriorModel posterior =
      build_posterior(y, phi, boundary, r.fit.theta.to_hyperparameters());
  r.prediction = predict(posterior, phi_query);
  return r;
}

SweepOutput run_boundary_count_sweep(const ExperimentConfig& config) {
  return run_sweep(config, SweepKind::kBoundaryCount);
}
SweepOutput run_boundary_perturbation_sweep(const ExperimentConfig& config) {
  return run_sweep(config, SweepKind::kBoundaryPerturbation);
}
SweepOutput run_mic_perturbation_sweep(const ExperimentConfig& config) {
  return run_sweep(config, SweepKind::kMicPerturbation);
}
SweepOutput run_frequency_sweep(const ExperimentConfig& config) {
  return run_sweep(config, SweepKind::kFrequency);
}

}  // namespace bisf
