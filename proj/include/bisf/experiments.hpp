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
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "bisf/bayes.hpp"
#include "bisf/dictionary.hpp"
#include "bisf/geometry.hpp"
#include "bisf/hyperopt.hpp"
#include "bisf/ism.hpp"
#include "bisf/types.hpp"

namespace bisf {

enum class Method { kNearest, kTikhonov, kLasso, kProposed };
enum class SweepKind { kBoundaryCount, kBoundaryPerturbation, kMicPerturbation, kFrequency };

std::string to_string(Method m);
std::string to_string(SweepKind s);
Method method_from_string(const std::string& name);
SweepKind sweep_from_string(const std::string& name);

struct LassoSettings {
  std::size_t grid_points = 20;
  double grid_low_ratio = 1e-4;
  int folds = 5;
  /// When set, lambda = ratio * ||Phi^H y||_inf / sigma^2 for every run
  /// instead of cross-validating per run.
  std::optional<double> fixed_lambda_ratio;
  int max_iterations = 2000;
  double tolerance = 1e-9;
};

struct ExperimentConfig {
  RoomSpec room;
  int max_order = kDefaultMaxOrder;
  double sound_speed = 343.0;
  double snr_db = 20.0;

  std::size_t mic_count = 100;
  std::size_t validation_count = 20;
  double validation_radius = 0.5;  // also the microphone exclusion radius
  std::size_t plane_waves = 1000;

  // Operating point shared by the sweeps that do not vary it.
  double frequency = 300.0;
  std::size_t boundary_count = 1000;

  std::vector<std::size_t> boundary_counts{0, 10, 30, 100, 300, 1000};
  std::vector<double> boundary_perturbations{0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<double> mic_perturbations{0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<double> frequencies{100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 800.0};
  PerturbationMode perturbation_mode = PerturbationMode::kPerPoint;

  int monte_carlo_runs = 10;
  std::vector<Method> methods{Method::kNearest, Method::kTikhonov, Method::kLasso,
                              Method::kProposed};
  std::vector<SweepKind> sweeps{SweepKind::kBoundaryCount, SweepKind::kBoundaryPerturbation,
                                SweepKind::kMicPerturbation, SweepKind::kFrequency};
  std::uint64_t seed = 1;

  MinimizeOptions optimizer;
  LassoSettings lasso;

  void validate() const;
  /// Centre of the validation ball (centroid of the microphone half).
  Point3 validation_center() const;
};

/// (1 / JN) sum |u - u_hat|^2 / |u|^2 over a J x N block. Entries with
/// |u| < 1e-15 are skipped; their number is stored in `excluded` if given,
/// otherwise reported on stderr.
double nmse(const CMatrix& predictions, const CMatrix& truth, std::size_t* excluded = nullptr);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

/// Everything one Monte-Carlo run of one sweep value needs to know.
struct TrialSpec {
  SweepKind sweep = SweepKind::kBoundaryCount;
  double value = 0.0;
  int run = 0;
  double frequency = 300.0;
  std::size_t boundary_count = 0;
  double boundary_perturbation = 0.0;
  double mic_perturbation = 0.0;
};

struct MethodOutcome {
  Method method = Method::kNearest;
  double nmse = 0.0;
  double seconds = 0.0;
  std::string error;  // empty on success
};

struct TrialOutcome {
  TrialSpec spec;
  std::vector<MethodOutcome> methods;
  /// Fitted hyperparameters and optimizer record (when those methods ran).
  std::optional<FitResult> proposed_fit;
  std::optional<FitResult> tikhonov_fit;
  std::optional<double> lasso_lambda;
};

struct RunResult {
  SweepKind sweep = SweepKind::kBoundaryCount;
  Method method = Method::kNearest;
  double value = 0.0;
  double nmse_linear = 0.0;
  double nmse_db = 0.0;
  /// Standard error of the mean NMSE across runs (linear).
  double nmse_stderr = 0.0;
  std::vector<double> per_run;
  std::vector<double> per_run_seconds;
  double seconds = 0.0;
  int failed_runs = 0;
};

struct SweepOutput {
  SweepKind sweep = SweepKind::kBoundaryCount;
  std::vector<RunResult> results;    // sorted by (value, method)
  std::vector<TrialOutcome> trials;  // sorted by (value, run)
};

/// Everything a trial reconstructs from, regenerated from the seeds.
struct TrialData {
  MicArray mics;        // true positions (simulation)
  MicArray assumed;     // positions used by the reconstruction
  MicArray validation;
  SimSnapshot snapshot;
  CVector truth;        // clean field at the validation points
  BoundaryCloud cloud;  // as assumed by the reconstruction
  PlaneWaveDictionary dictionary;
  CMatrix phi;          // atoms at the assumed mic positions
  CMatrix phi_validation;
};

/// Shared, read-only context for a sweep (image sources of the room).
class Scenario {
 public:
  explicit Scenario(ExperimentConfig config);
  const ExperimentConfig& config() const { return config_; }
  const std::vector<ImageSource>& images() const { return images_; }

  TrialData trial_data(const TrialSpec& spec) const;
  /// One Monte-Carlo trial with the methods from the config.
  TrialOutcome run_trial(const TrialSpec& spec) const;

 private:
  ExperimentConfig config_;
  std::vector<ImageSource> images_;
};

/// Specs for every (value, run) pair of a sweep, in output order.
std::vector<TrialSpec> sweep_trials(const ExperimentConfig& config, SweepKind sweep);

/// Trial outcomes keyed by the physical trial parameters (frequency, boundary
/// count, both perturbations, run), so sweeps that share an operating point
/// compute it once. Only valid across sweeps of a single configuration.
class TrialCache {
 public:
  /// Outcome restricted to `methods`, relabelled with `spec`; nullopt when
  /// the trial is absent or lacks one of the methods.
  std::optional<TrialOutcome> find(const TrialSpec& spec, const std::vector<Method>& methods) const;
  void insert(const TrialOutcome& outcome);
  std::size_t size() const;

 private:
  using Key = std::tuple<double, std::size_t, double, double, int>;
  static Key key(const TrialSpec& spec);
  mutable std::mutex mutex_;
  std::map<Key, TrialOutcome> entries_;
};

/// Runs all trials (in parallel across runs) and aggregates. Trials found in
/// `cache` are reused; new ones are added to it.
SweepOutput run_sweep(const ExperimentConfig& config, SweepKind sweep,
                      TrialCache* cache = nullptr);

SweepOutput run_boundary_count_sweep(const ExperimentConfig& config);
SweepOutput run_boundary_perturbation_sweep(const ExperimentConfig& config);
SweepOutput run_mic_perturbation_sweep(const ExperimentConfig& config);
SweepOutput run_frequency_sweep(const ExperimentConfig& config);

/// Aggregates trial outcomes into one RunResult per (value, method).
std::vector<RunResult> aggregate(SweepKind sweep, const std::vector<TrialOutcome>& trials,
                                 const std::vector<Method>& methods);

/// Fit-and-predict for one snapshot: the Tikhonov fit, then the boundary
/// model (skipped when the cloud is empty, where mu and beta do not enter).
struct Reconstruction {
  FitResult tikhonov_fit;
  FitResult fit;
  Prediction prediction;
};
Reconstruction reconstruct_field(const CVector& y, const CMatrix& phi,
                                 const BoundaryMatrices& boundary, const CMatrix& phi_query,
                                 const MinimizeOptions& options);

/// Seed streams for the random components of a trial.
enum class SeedStream : std::uint64_t {
  kMicrophones = 1,
  kValidation = 2,
  kBoundary = 3,
  kNoise = 4,
  kBoundaryPerturbation = 5,
  kMicPerturbation = 6,
  kCrossValidation = 7,
};

std::uint64_t trial_seed(std::uint64_t master, SeedStream stream, int run);

}  // namespace bisf
