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

// bisf: simulate snapshots, reconstruct fields and run the benchmark sweeps.
//
// Exit status: 0 success, 1 usage or unexpected error, 2 configuration
// error, 3 numerical failure, 4 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bisf/config.hpp"
#include "bisf/dictionary.hpp"
#include "bisf/experiments.hpp"
#include "bisf/io.hpp"
#include "bisf/runtime.hpp"

namespace fs = std::filesystem;
using namespace bisf;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

// Scalar fields that may be overridden from the command line.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> frequency;
  std::optional<std::size_t> boundary_count;
  std::optional<std::size_t> mic_count;
  std::optional<std::size_t> plane_waves;
  std::optional<int> runs;
  std::optional<double> snr_db;
  std::optional<int> max_order;
  std::optional<int> max_line_searches;

  void attach(CLI::App& cmd) {
    cmd.add_option("--seed", seed, "Master seed");
    cmd.add_option("--frequency", frequency, "Operating frequency in Hz");
    cmd.add_option("--boundary-count", boundary_count, "Boundary points at the operating point");
    cmd.add_option("--mic-count", mic_count, "Number of microphones");
    cmd.add_option("--plane-waves", plane_waves, "Dictionary size P");
    cmd.add_option("--runs", runs, "Monte-Carlo runs per sweep value");
    cmd.add_option("--snr-db", snr_db, "Measurement SNR in dB");
    cmd.add_option("--max-order", max_order, "Image-source reflection order");
    cmd.add_option("--max-line-searches", max_line_searches, "Optimizer line-search budget");
  }

  void apply(ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (frequency) c.frequency = *frequency;
    if (boundary_count) c.boundary_count = *boundary_count;
    if (mic_count) c.mic_count = *mic_count;
    if (plane_waves) c.plane_waves = *plane_waves;
    if (runs) c.monte_carlo_runs = *runs;
    if (snr_db) c.snr_db = *snr_db;
    if (max_order) c.max_order = *max_order;
    if (max_line_searches) c.optimizer.max_line_searches = *max_line_searches;
    c.validate();
  }
};

AppConfig load_with_overrides(const std::string& path, const Overrides& overrides) {
  AppConfig app = path.empty() ? AppConfig{} : load_config(path);
  overrides.apply(app.experiment);
  return app;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  io::write_file_atomic(path, doc.dump(2) + "\n");
}

int cmd_simulate(const std::string& config_path, const fs::path& out, int run,
                 const Overrides& overrides) {
  const AppConfig app = load_with_overrides(config_path, overrides);
  const ExperimentConfig& cfg = app.experiment;
  ensure_directory(out);

  const Scenario scenario(cfg);
  TrialSpec spec;
  spec.run = run;
  spec.frequency = cfg.frequency;
  spec.boundary_count = cfg.boundary_count;
  const TrialData data = scenario.trial_data(spec);

  io::SnapshotFile snap;
  snap.snapshot = data.snapshot;
  snap.positions = data.mics.positions;
  snap.room = cfg.room;
  snap.max_order = cfg.max_order;
  io::write_snapshot(out / "snapshot.txt", snap);

  // Ground truth at the validation points, in the same format without noise.
  io::SnapshotFile truth = snap;
  truth.snapshot.clean = data.truth;
  truth.snapshot.noisy = data.truth;
  truth.snapshot.noise_variance = 0.0;
  truth.positions = data.validation.positions;
  io::write_snapshot(out / "validation.txt", truth);

  io::write_boundary_cloud(out / "boundary.txt", data.cloud);
  io::write_points(out / "mics.txt", data.mics.positions);
  write_json(out / "config.json", config_to_json(app));
  std::cout << "wrote " << data.mics.size() << " microphones, " << data.cloud.size()
            << " boundary points and " << data.validation.size() << " validation points to "
            << out.string() << "\n";
  return kOk;
}

int cmd_reconstruct(const fs::path& snapshot_path, const fs::path& cloud_path,
                    const std::string& config_path, const fs::path& points_path,
                    const fs::path& out, const Overrides& overrides) {
  const AppConfig app = load_with_overrides(config_path, overrides);
  const ExperimentConfig& cfg = app.experiment;
  const io::SnapshotFile snap = io::read_snapshot(snapshot_path);
  const BoundaryCloud cloud = io::read_boundary_cloud(cloud_path);
  ensure_directory(out);

  std::vector<Point3> query;
  if (!points_path.empty()) {
    query = io::read_points(points_path);
  } else if (app.query_points) {
    query = *app.query_points;
  } else {
    query = sample_validation_points(cfg.room, cfg.validation_count, cfg.validation_center(),
                                     cfg.validation_radius,
                                     trial_seed(cfg.seed, SeedStream::kValidation, 0))
                .positions;
  }
  if (query.empty()) throw ConfigError("reconstruct: no query points");

  const double k = wavenumber(snap.snapshot.frequency, snap.snapshot.sound_speed);
  const auto dict = PlaneWaveDictionary::fibonacci(k, cfg.plane_waves);
  const CMatrix phi = build_phi(dict, snap.positions);
  const BoundaryMatrices boundary = BoundaryMatrices::build(dict, cloud);
  const auto t0 = std::chrono::steady_clock::now();
  const Reconstruction r =
      reconstruct_field(snap.snapshot.noisy, phi, boundary, build_phi(dict, query), cfg.optimizer);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  io::write_file_atomic(out / "field.txt", io::format_reconstruction(query, r.prediction));
  io::write_file_atomic(out / "theta.txt",
                        io::format_theta(r.fit.theta, r.fit.value, r.fit.optimizer.status));
  io::write_file_atomic(out / "trace.csv", io::optimizer_trace_csv(r.fit.optimizer));
  std::cout << "J = " << io::format_double(r.fit.value) << " ("
            << to_string(r.fit.optimizer.status) << ", " << r.fit.optimizer.line_searches
            << " line searches, " << seconds << " s); field at " << query.size()
            << " points written to " << out.string() << "\n";
  return kOk;
}

int cmd_benchmark(const std::string& config_path, const fs::path& out,
                  const std::vector<std::string>& sweep_names, const Overrides& overrides) {
  AppConfig app = load_with_overrides(config_path, overrides);
  ExperimentConfig& cfg = app.experiment;
  if (!sweep_names.empty()) {
    cfg.sweeps.clear();
    for (const auto& name : sweep_names) cfg.sweeps.push_back(sweep_from_string(name));
  }
  ensure_directory(out);
  write_json(out / "config.json", config_to_json(app));

  TrialCache cache;
  for (SweepKind sweep : cfg.sweeps) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepOutput result = run_sweep(cfg, sweep, &cache);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string name = to_string(sweep);
    io::write_file_atomic(out / (name + "_runs.csv"), io::runs_csv(result));
    io::write_file_atomic(out / (name + "_aggregate.csv"), io::aggregate_csv(result));
    std::cerr << name << ": " << result.trials.size() << " trials in " << seconds << " s\n";
    for (const auto& r : result.results) {
      std::cerr << "  " << to_string(r.method) << " @ " << io::format_double(r.value) << ": "
                << r.nmse_db << " dB";
      if (r.failed_runs > 0) std::cerr << " (" << r.failed_runs << " failed)";
      std::cerr << "\n";
    }
  }
  return kOk;
}

int cmd_gradcheck(const GradientCheckOptions& options, double tolerance) {
  const GradientCheckReport report = run_gradient_check(options);
  std::cout << "max relative error " << report.max_relative_error << " over "
            << options.instances << " instances x " << options.thetas_per_instance
            << " theta (both Gram routes, step " << options.step << ", " << report.seconds
            << " s)\n";
  return report.max_relative_error < tolerance ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-informed sound-field reconstruction"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  Overrides overrides;

  auto* simulate = app.add_subcommand("simulate", "Write a snapshot, boundary cloud and mics");
  int sim_run = 0;
  simulate->add_option("--config", config_path, "JSON config")->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--run", sim_run, "Monte-Carlo run whose seeds are used");
  overrides.attach(*simulate);

  auto* reconstruct = app.add_subcommand("reconstruct", "Fit hyperparameters and predict");
  std::string snapshot_path;
  std::string cloud_path;
  std::string points_path;
  reconstruct->add_option("--snapshot", snapshot_path, "Snapshot file")->required();
  reconstruct->add_option("--boundary", cloud_path, "Boundary cloud file")->required();
  reconstruct->add_option("--config", config_path, "JSON config");
  reconstruct->add_option("--points", points_path, "Query points file (x y z rows)");
  reconstruct->add_option("--out", out_dir, "Output directory")->required();
  overrides.attach(*reconstruct);

  auto* benchmark = app.add_subcommand("benchmark", "Run the sweeps and write CSVs");
  std::vector<std::string> sweeps;
  benchmark->add_option("--config", config_path, "JSON config");
  benchmark->add_option("--out", out_dir, "Output directory")->required();
  benchmark->add_option("--sweep", sweeps,
                        "Sweep to run (repeatable): boundary_count, boundary_perturbation, "
                        "mic_perturbation, frequency");
  overrides.attach(*benchmark);

  auto* gradcheck = app.add_subcommand("gradcheck", "Compare analytic and FD gradients");
  GradientCheckOptions gc;
  double gc_tolerance = 1e-5;
  gradcheck->add_option("--instances", gc.instances, "Random instances");
  gradcheck->add_option("--thetas", gc.thetas_per_instance, "Random theta per instance");
  gradcheck->add_option("--step", gc.step, "Central-difference step");
  gradcheck->add_option("--seed", gc.seed, "Seed");
  gradcheck->add_option("--tolerance", gc_tolerance, "Fail above this relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    configure_runtime();
    if (*simulate) return cmd_simulate(config_path, out_dir, sim_run, overrides);
    if (*reconstruct) {
      return cmd_reconstruct(snapshot_path, cloud_path, config_path, points_path, out_dir,
                             overrides);
    }
    if (*benchmark) return cmd_benchmark(config_path, out_dir, sweeps, overrides);
    if (*gradcheck) return cmd_gradcheck(gc, gc_tolerance);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
