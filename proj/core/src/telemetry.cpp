// Copyright 2026 The teleop Authors
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

#include "teleop/telemetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "json_util.hpp"
#include "teleop/config.hpp"

namespace teleop {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quaternions are compared by coefficients; q and -q count as different
// because logs are compared for replay, not for geometry.
double diff(const Pose& a, const Pose& b) {
  return std::max((a.position - b.position).cwiseAbs().maxCoeff(),
                  (a.orientation.coeffs() - b.orientation.coeffs()).cwiseAbs().maxCoeff());
}

double diff(const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

json to_json(const LogRecord& r) {
  return {{"tick", r.tick},
          {"t", r.t},
          {"a", r.a},
          {"b", r.b},
          {"engaged", r.engaged},
          {"phi", r.phi},
          {"stylus", to_json(r.stylus)},
          {"desired", to_json(r.desired)},
          {"commanded", to_json(r.commanded)},
          {"measured", to_json(r.measured)},
          {"force", to_json(r.force)},
          {"feedback", to_json(r.feedback)},
          {"tracking_error", to_json(r.tracking_error)},
          {"scale", r.scale_factor},
          {"stale", r.events.stale_reference},
          {"clamped", r.events.deviation_clamped},
          {"emergency", r.events.emergency_active}};
}

LogRecord log_record_from_json(const json& j) {
  using detail::number;
  using detail::require;
  LogRecord r;
  const std::string p;
  r.tick = detail::unsigned_integer(require(j, "tick", p), "/tick");
  r.t = number(require(j, "t", p), "/t");
  r.a = number(require(j, "a", p), "/a");
  r.b = number(require(j, "b", p), "/b");
  const auto flag = [&](const char* key) {
    const json& v = require(j, key, p);
    if (!v.is_boolean()) throw ConfigError(std::string("/") + key, "expected a boolean");
    return v.get<bool>();
  };
  r.engaged = flag("engaged");
  r.phi = number(require(j, "phi", p), "/phi");
  r.stylus = parse_pose(require(j, "stylus", p), "/stylus");
  r.desired = parse_pose(require(j, "desired", p), "/desired");
  r.commanded = parse_pose(require(j, "commanded", p), "/commanded");
  r.measured = parse_pose(require(j, "measured", p), "/measured");
  r.force = parse_vec3(require(j, "force", p), "/force");
  r.feedback = parse_vec3(require(j, "feedback", p), "/feedback");
  r.tracking_error = parse_vec3(require(j, "tracking_error", p), "/tracking_error");
  r.scale_factor = number(require(j, "scale", p), "/scale");
  r.events.stale_reference = flag("stale");
  r.events.deviation_clamped = flag("clamped");
  r.events.emergency_active = flag("emergency");
  return r;
}

void write_log_jsonl(std::ostream& os, const std::vector<LogRecord>& log) {
  for (const LogRecord& r : log) {
    os << to_json(r).dump() << '\n';
  }
}

void write_log_jsonl(const std::filesystem::path& file, const std::vector<LogRecord>& log) {
  if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path());
  }
  std::ofstream os(file);
  if (!os) {
    throw std::runtime_error("cannot write " + file.string());
  }
  write_log_jsonl(os, log);
}

std::vector<LogRecord> read_log_jsonl(std::istream& is) {
  std::vector<LogRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(log_record_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ConfigError("line " + std::to_string(lineno), e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + e.path(), e.what());
    }
  }
  return out;
}

std::vector<LogRecord> read_logs(const std::filesystem::path& file_or_dir) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(file_or_dir)) {
    for (const auto& e : std::filesystem::directory_iterator(file_or_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(file_or_dir);
  }
  std::vector<LogRecord> out;
  for (const auto& f : files) {
    std::ifstream is(f);
    if (!is) {
      throw std::runtime_error("cannot read " + f.string());
    }
    std::vector<LogRecord> part = read_log_jsonl(is);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double max_field_difference(const LogRecord& x, const LogRecord& y) {
  if (x.tick != y.tick || x.engaged != y.engaged || !(x.events == y.events)) {
    return kInf;
  }
  double d = 0.0;
  for (double v : {std::abs(x.t - y.t), std::abs(x.a - y.a), std::abs(x.b - y.b),
                   std::abs(x.phi - y.phi), std::abs(x.scale_factor - y.scale_factor),
                   diff(x.stylus, y.stylus), diff(x.desired, y.desired),
                   diff(x.commanded, y.commanded), diff(x.measured, y.measured),
                   diff(x.force, y.force), diff(x.feedback, y.feedback),
                   diff(x.tracking_error, y.tracking_error)}) {
    if (std::isnan(v)) return kInf;
    d = std::max(d, v);
  }
  return d;
}

double max_field_difference(const std::vector<LogRecord>& x, const std::vector<LogRecord>& y) {
  if (x.size() != y.size()) {
    return kInf;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, max_field_difference(x[i], y[i]));
  }
  return d;
}

}  // namespace teleop
