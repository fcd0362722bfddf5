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

#include "bisf/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace bisf::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw IoError("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& context) {
  if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token[0] == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw IoError(context + ": cannot parse number '" + token + "'");
  }
  return v;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Non-comment, non-blank lines split on whitespace, with 1-based line numbers.
struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

std::vector<Record> data_records(const std::string& text) {
  std::vector<Record> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Record r{n, {}};
    std::string tok;
    while (ls >> tok) r.fields.push_back(tok);
    if (!r.fields.empty()) out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> numbers(const Record& r, std::size_t expected, const std::string& what) {
  const std::string ctx = what + " line " + std::to_string(r.line);
  if (r.fields.size() != expected) {
    throw IoError(ctx + ": expected " + std::to_string(expected) + " fields, got " +
                  std::to_string(r.fields.size()));
  }
  std::vector<double> v;
  v.reserve(expected);
  for (const auto& f : r.fields) v.push_back(parse_double(f, ctx));
  return v;
}

void append_row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out += ' ';
    out += format_double(v);
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_boundary_cloud(const BoundaryCloud& cloud) {
  cloud.validate();
  std::string out = "# x y z nx ny nz\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud.points[i];
    const auto& n = cloud.normals[i];
    append_row(out, {p.x(), p.y(), p.z(), n.x(), n.y(), n.z()});
  }
  return out;
}

BoundaryCloud parse_boundary_cloud(const std::string& text) {
  BoundaryCloud cloud;
  for (const auto& r : data_records(text)) {
    const auto v = numbers(r, 6, "boundary cloud");
    cloud.points.emplace_back(v[0], v[1], v[2]);
    const Eigen::Vector3d n(v[3], v[4], v[5]);
    if (std::abs(n.norm() - 1.0) > 1e-9) {
      throw IoError("boundary cloud line " + std::to_string(r.line) + ": normal is not unit length");
    }
    cloud.normals.emplace_back(n);
  }
  return cloud;
}

void write_boundary_cloud(const std::filesystem::path& path, const BoundaryCloud& cloud) {
  write_file_atomic(path, format_boundary_cloud(cloud));
}

BoundaryCloud read_boundary_cloud(const std::filesystem::path& path) {
  return parse_boundary_cloud(read_file(path));
}

std::string format_points(std::span<const Point3> points) {
  std::string out = "# x y z\n";
  for (const auto& p : points) append_row(out, {p.x(), p.y(), p.z()});
  return out;
}

std::vector<Point3> parse_points(const std::string& text) {
  std::vector<Point3> pts;
  for (const auto& r : data_records(text)) {
    const auto v = numbers(r, 3, "point list");
    pts.emplace_back(v[0], v[1], v[2]);
  }
  return pts;
}

void write_points(const std::filesystem::path& path, std::span<const Point3> points) {
  write_file_atomic(path, format_points(points));
}

std::vector<Point3> read_points(const std::filesystem::path& path) {
  return parse_points(read_file(path));
}

std::string format_snapshot(const SnapshotFile& file) {
  const auto& s = file.snapshot;
  if (static_cast<Index>(file.positions.size()) != s.clean.size() ||
      s.clean.size() != s.noisy.size()) {
    throw IoError("snapshot: positions, clean and noisy lengths differ");
  }
  std::string out = "# bisf-snapshot 1\n";
  out += "# frequency " + format_double(s.frequency) + "\n";
  out += "# sound_speed " + format_double(s.sound_speed) + "\n";
  out += "# noise_variance " + format_double(s.noise_variance) + "\n";
  out += "# seed " + std::to_string(s.seed) + "\n";
  const auto& r = file.room;
  out += "# room";
  for (double v : {r.dimensions.x(), r.dimensions.y(), r.dimensions.z(), r.reflection_coefficient,
                   r.source.x(), r.source.y(), r.source.z()}) {
    out += ' ' + format_double(v);
  }
  out += "\n# max_order " + std::to_string(file.max_order) + "\n";
  out += "# columns x y z re_clean im_clean re_noisy im_noisy\n";
  for (std::size_t m = 0; m < file.positions.size(); ++m) {
    const auto& p = file.positions[m];
    const auto i = static_cast<Index>(m);
    append_row(out, {p.x(), p.y(), p.z(), s.clean[i].real(), s.clean[i].imag(), s.noisy[i].real(),
                     s.noisy[i].imag()});
  }
  return out;
}

SnapshotFile parse_snapshot(const std::string& text) {
  SnapshotFile file;
  std::map<std::string, std::vector<std::string>> header;
  std::istringstream in(text);
  std::string line;
  bool magic = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') continue;
    std::istringstream ls(line.substr(1));
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> vals;
    std::string tok;
    while (ls >> tok) vals.push_back(tok);
    if (key == "bisf-snapshot") magic = true;
    header[key] = std::move(vals);
  }
  if (!magic) throw IoError("snapshot: missing '# bisf-snapshot' header");
  auto scalar = [&](const std::string& key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end() || it->second.size() != 1) {
      throw IoError("snapshot: header record '" + key + "' missing or malformed");
    }
    return it->second[0];
  };
  auto& s = file.snapshot;
  s.frequency = parse_double(scalar("frequency"), "snapshot frequency");
  s.sound_speed = parse_double(scalar("sound_speed"), "snapshot sound_speed");
  s.noise_variance = parse_double(scalar("noise_variance"), "snapshot noise_variance");
  try {
    s.seed = std::stoull(scalar("seed"));
    file.max_order = std::stoi(scalar("max_order"));
  } catch (const std::logic_error&) {
    throw IoError("snapshot: malformed integer header record");
  }
  const auto room_it = header.find("room");
  if (room_it == header.end() || room_it->second.size() != 7) {
    throw IoError("snapshot: header record 'room' needs 7 values");
  }
  std::vector<double> rv;
  for (const auto& t : room_it->second) rv.push_back(parse_double(t, "snapshot room"));
  file.room.dimensions = {rv[0], rv[1], rv[2]};
  file.room.reflection_coefficient = rv[3];
  file.room.source = {rv[4], rv[5], rv[6]};

  const auto records = data_records(text);
  s.clean.resize(static_cast<Index>(records.size()));
  s.noisy.resize(static_cast<Index>(records.size()));
  for (std::size_t m = 0; m < records.size(); ++m) {
    const auto v = numbers(records[m], 7, "snapshot");
    file.positions.emplace_back(v[0], v[1], v[2]);
    s.clean[static_cast<Index>(m)] = {v[3], v[4]};
    s.noisy[static_cast<Index>(m)] = {v[5], v[6]};
  }
  return file;
}

void write_snapshot(const std::filesystem::path& path, const SnapshotFile& file) {
  write_file_atomic(path, format_snapshot(file));
}

SnapshotFile read_snapshot(const std::filesystem::path& path) {
  return parse_snapshot(read_file(path));
}

std::string runs_csv(const SweepOutput& sweep) {
  std::string out = "sweep,method,value,run,nmse_linear,nmse_db,seconds\n";
  for (const auto& t : sweep.trials) {
    for (const auto& mo : t.methods) {
      out += to_string(sweep.sweep) + ',' + to_string(mo.method) + ',' +
             format_double(t.spec.value) + ',' + std::to_string(t.spec.run) + ',' +
             format_double(mo.nmse) + ',' + format_double(to_db(mo.nmse)) + ',' +
             format_double(mo.seconds) + '\n';
    }
  }
  return out;
}

std::string aggregate_csv(const SweepOutput& sweep) {
  std::string out = "sweep,method,value,runs,failed,nmse_linear,nmse_db,nmse_stderr\n";
  for (const auto& r : sweep.results) {
    out += to_string(r.sweep) + ',' + to_string(r.method) + ',' + format_double(r.value) + ',' +
           std::to_string(r.per_run.size()) + ',' + std::to_string(r.failed_runs) + ',' +
           format_double(r.nmse_linear) + ',' + format_double(r.nmse_db) + ',' +
           format_double(r.nmse_stderr) + '\n';
  }
  return out;
}

std::string optimizer_trace_csv(const MinimizeResult& result) {
  std::string out = "iter,J,a,b,d,re_eta,im_eta\n";
  for (std::size_t i = 0; i < result.accepted_values.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(result.accepted_values[i]);
    const auto& x = result.accepted_points[i];
    for (Index j = 0; j < x.size(); ++j) out += ',' + format_double(x[j]);
    out += '\n';
  }
  return out;
}

std::string format_reconstruction(std::span<const Point3> points, const Prediction& prediction) {
  if (static_cast<Index>(points.size()) != prediction.mean.size()) {
    throw IoError("reconstruction: point count does not match prediction");
  }
  std::string out = "# x y z re_mean im_mean std\n";
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto i = static_cast<Index>(j);
    const auto& p = points[j];
    append_row(out, {p.x(), p.y(), p.z(), prediction.mean[i].real(), prediction.mean[i].imag(),
                     std::sqrt(prediction.variance[i])});
  }
  return out;
}

std::string format_theta(const ThetaVector& theta, double objective, MinimizeStatus status) {
  const Hyperparameters hp = theta.to_hyperparameters();
  std::string out;
  auto kv = [&](const std::string& k, double v) { out += k + ' ' + format_double(v) + '\n'; };
  kv("a", theta.a);
  kv("b", theta.b);
  kv("d", theta.d);
  kv("re_eta", theta.eta.real());
  kv("im_eta", theta.eta.imag());
  kv("sigma2", hp.sigma2);
  kv("sigma_alpha2", hp.sigma_alpha2);
  kv("mu", hp.mu);
  kv("re_beta", hp.beta.real());
  kv("im_beta", hp.beta.imag());
  kv("objective", objective);
  out += "status " + to_string(status) + '\n';
  return out;
}

}  // namespace bisf::io
