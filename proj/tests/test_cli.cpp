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


#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "bisf/baselines.hpp"
#include "bisf/config.hpp"
#include "bisf/dictionary.hpp"
#include "bisf/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "bisf_test_cli";

int run(const std::string& args) {
  const std::string cmd = std::string(BISF_CLI_PATH) + " " + args + " > " +
                          (kWork / "stdout.txt").string() + " 2> " +
                          (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string quick_config() { return std::string(BISF_SOURCE_DIR) + "/configs/quick.json"; }

struct Workspace {
  Workspace() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workspace, "simulate then reconstruct") {
  const fs::path sim = kWork / "sim";
  REQUIRE(run("simulate --config " + quick_config() + " --out " + sim.string()) == 0);
  for (const char* f : {"snapshot.txt", "boundary.txt", "mics.txt", "validation.txt", "config.json"}) {
    CHECK(fs::exists(sim / f));
  }
  const fs::path rec = kWork / "rec";
  REQUIRE(run("reconstruct --config " + quick_config() + " --snapshot " +
              (sim / "snapshot.txt").string() + " --boundary " + (sim / "boundary.txt").string() +
              " --points " + (sim / "mics.txt").string() + " --out " + rec.string()) == 0);
  const auto field = bisf::io::read_file(rec / "field.txt");
  const auto mics = bisf::io::read_points(sim / "mics.txt");
  std::size_t rows = 0;
  for (char c : field) rows += c == '\n';
  CHECK(rows == mics.size() + 1);
  CHECK(slurp(rec / "theta.txt").find("status") != std::string::npos);
  CHECK(slurp(rec / "trace.csv").rfind("iter,J,a,b,d,re_eta,im_eta", 0) == 0);
}

TEST_CASE_FIXTURE(Workspace, "simulate is reproducible") {
  REQUIRE(run("simulate --config " + quick_config() + " --out " + (kWork / "a").string()) == 0);
  REQUIRE(run("simulate --config " + quick_config() + " --out " + (kWork / "b").string()) == 0);
  CHECK(slurp(kWork / "a" / "snapshot.txt") == slurp(kWork / "b" / "snapshot.txt"));
  REQUIRE(run("simulate --config " + quick_config() + " --seed 2 --out " + (kWork / "c").string()) == 0);
  CHECK(slurp(kWork / "a" / "snapshot.txt") != slurp(kWork / "c" / "snapshot.txt"));
}

TEST_CASE_FIXTURE(Workspace, "empty boundary reconstructs along the Tikhonov path") {
  const fs::path sim = kWork / "sim";
  REQUIRE(run("simulate --config " + quick_config() + " --out " + sim.string()) == 0);
  bisf::io::write_file_atomic(kWork / "empty.txt", "# x y z nx ny nz\n");
  REQUIRE(run("reconstruct --config " + quick_config() + " --snapshot " +
              (sim / "snapshot.txt").string() + " --boundary " + (kWork / "empty.txt").string() +
              " --points " + (sim / "mics.txt").string() + " --out " + (kWork / "rec").string()) == 0);

  // Ridge estimate with the fitted variances, evaluated at the same points.
  std::map<std::string, double> theta;
  std::istringstream lines(slurp(kWork / "rec" / "theta.txt"));
  for (std::string key, value; lines >> key >> value;) {
    if (key != "status") theta[key] = bisf::io::parse_double(value, key);
  }
  const auto snap = bisf::io::read_snapshot(sim / "snapshot.txt");
  const auto config = bisf::load_config(quick_config());
  const auto dict = bisf::PlaneWaveDictionary::fibonacci(
      bisf::wavenumber(snap.snapshot.frequency, snap.snapshot.sound_speed),
      config.experiment.plane_waves);
  const bisf::CVector alpha = bisf::tikhonov(snap.snapshot.noisy, bisf::build_phi(dict, snap.positions),
                                             theta.at("sigma2"), theta.at("sigma_alpha2"));
  const auto query = bisf::io::read_points(sim / "mics.txt");
  const bisf::CVector expect = bisf::evaluate_field(dict, alpha, query);

  std::istringstream rows(slurp(kWork / "rec" / "field.txt"));
  std::string line;
  std::getline(rows, line);
  double err = 0.0;
  for (bisf::Index j = 0; j < expect.size(); ++j) {
    double x, y, z, re, im, sd;
    rows >> x >> y >> z >> re >> im >> sd;
    err = std::max(err, std::abs(bisf::Complex(re, im) - expect[j]) / std::abs(expect[j]));
  }
  CHECK(err < 1e-8);
}

TEST_CASE_FIXTURE(Workspace, "benchmark writes per-run and aggregate CSVs") {
  REQUIRE(run("benchmark --config " + quick_config() + " --sweep frequency --runs 1 --out " +
              (kWork / "bench").string()) == 0);
  CHECK(slurp(kWork / "bench" / "frequency_runs.csv")
            .rfind("sweep,method,value,run,nmse_linear,nmse_db,seconds\n", 0) == 0);
  CHECK(fs::exists(kWork / "bench" / "frequency_aggregate.csv"));
  CHECK_FALSE(fs::exists(kWork / "bench" / "boundary_count_aggregate.csv"));
}

TEST_CASE_FIXTURE(Workspace, "gradcheck passes") {
  CHECK(run("gradcheck --instances 2 --thetas 2") == 0);
  CHECK(slurp(kWork / "stdout.txt").find("max relative error") != std::string::npos);
}

TEST_CASE_FIXTURE(Workspace, "exit codes distinguish failure classes") {
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  bisf::io::write_file_atomic(kWork / "bad.json", R"({"microphones": {"cuont": 3}})");
  CHECK(run("simulate --config " + (kWork / "bad.json").string() + " --out " +
            (kWork / "x").string()) == 2);
  CHECK(slurp(kWork / "stderr.txt").find("microphones.cuont") != std::string::npos);
  CHECK(run("simulate --config " + quick_config() + " --plane-waves 0 --out " +
            (kWork / "x").string()) == 2);
  CHECK(run("reconstruct --snapshot " + (kWork / "missing.txt").string() + " --boundary " +
            (kWork / "missing.txt").string() + " --out " + (kWork / "x").string()) == 4);
  CHECK(run("gradcheck --instances 1 --thetas 1 --tolerance 0") == 3);
}

TEST_CASE_FIXTURE(Workspace, "thread count comes from the environment") {
  const std::string base = "simulate --config " + quick_config() + " --out " + (kWork / "t").string();
  const std::string cmd = std::string("BISF_NUM_THREADS=abc ") + BISF_CLI_PATH + " " + base +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  const std::string ok = std::string("BISF_NUM_THREADS=2 ") + BISF_CLI_PATH + " " + base +
                         " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(ok.c_str())) == 0);
}
