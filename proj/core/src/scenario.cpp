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

#include "teleop/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace teleop {

using nlohmann::json;
using detail::check_keys;
using detail::child;
using detail::number;

const char* to_string(ScenarioId id) { return id == ScenarioId::kA ? "A" : "B"; }

ScenarioConfig::ScenarioConfig() {
  pipeline.engagement_hold = 0.0;
  pipeline.interaction.safety.force_scaling_gain = 0.1;
  script.waypoints.push_back({});
}

std::size_t ScenarioConfig::tick_count() const {
  return static_cast<std::size_t>(std::llround(duration / pipeline.ehcc.control_period));
}

ScenarioConfig parse_scenario_config(const json& j, const std::string& path) {
  check_keys(j, path,
             {"name", "scenario", "duration", "seed", "control_period", "ehcc", "admittance",
              "safety", "force_window", "hfc", "engagement", "world", "script"});
  ScenarioConfig c;
  if (const json* v = child(j, "name")) c.name = detail::string(*v, path + "/name");
  if (const json* v = child(j, "scenario")) {
    const std::string s = detail::string(*v, path + "/scenario");
    if (s == "A") {
      c.scenario = ScenarioId::kA;
    } else if (s == "B") {
      c.scenario = ScenarioId::kB;
    } else {
      throw ConfigError(path + "/scenario", "expected \"A\" or \"B\"");
    }
  }
  if (const json* v = child(j, "duration")) {
    c.duration = number(*v, path + "/duration");
    if (!(c.duration > 0.0) || c.duration > 1e6) {
      throw ConfigError(path + "/duration", "must be in (0, 1e6]");
    }
  }
  if (const json* v = child(j, "seed")) c.seed = detail::unsigned_integer(*v, path + "/seed");
  if (const json* v = child(j, "control_period")) {
    const double ts = number(*v, path + "/control_period");
    if (!(ts > 0.0) || ts > 1.0) throw ConfigError(path + "/control_period", "must be in (0, 1]");
    c.pipeline.ehcc.control_period = ts;
    c.pipeline.interaction.control_period = ts;
  }
  if (const json* v = child(j, "ehcc")) {
    c.pipeline.ehcc = parse_ehcc(*v, path + "/ehcc", c.pipeline.ehcc);
  }
  if (const json* v = child(j, "admittance")) {
    c.pipeline.interaction.admittance =
        parse_admittance(*v, path + "/admittance", c.pipeline.interaction.admittance);
  }
  if (const json* v = child(j, "safety")) {
    c.pipeline.interaction.safety = parse_safety(*v, path + "/safety", c.pipeline.interaction.safety,
                                                 &c.pipeline.interaction.emergency_policy);
  }
  if (const json* v = child(j, "force_window")) {
    const double n = number(*v, path + "/force_window");
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) {
      throw ConfigError(path + "/force_window", "must be an integer in [1, 1e6]");
    }
    c.pipeline.interaction.force_window = static_cast<std::size_t>(n);
  }
  if (const json* v = child(j, "hfc")) c.pipeline.hfc = parse_hfc(*v, path + "/hfc", c.pipeline.hfc);
  if (const json* e = child(j, "engagement")) {
    const std::string ep = path + "/engagement";
    check_keys(*e, ep, {"hold", "timeout"});
    if (const json* v = child(*e, "hold")) {
      c.pipeline.engagement_hold = number(*v, ep + "/hold");
      if (!(c.pipeline.engagement_hold >= 0.0)) throw ConfigError(ep + "/hold", "must be >= 0");
    }
    if (const json* v = child(*e, "timeout")) {
      if (!v->is_null()) {
        c.pipeline.engagement_timeout = number(*v, ep + "/timeout");
        if (!(c.pipeline.engagement_timeout > 0.0)) {
          throw ConfigError(ep + "/timeout", "must be > 0");
        }
      }
    }
  }
  c.world = parse_world(child(j, "world") ? *child(j, "world") : json::object(), path + "/world",
                        c.seed);
  c.script = parse_script(detail::require(j, "script", path), path + "/script", c.seed);

  double& gain = c.pipeline.interaction.safety.force_scaling_gain;
  if (c.scenario == ScenarioId::kA) {
    gain = 0.0;
  } else if (!(gain > 0.0)) {
    throw ConfigError(path + "/safety/force_scaling_gain", "scenario B needs a gain > 0");
  }
  return c;
}

json to_json(const ScenarioConfig& c) {
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"name", c.name},
          {"scenario", to_string(c.scenario)},
          {"duration", c.duration},
          {"seed", c.seed},
          {"control_period", c.pipeline.ehcc.control_period},
          {"ehcc", to_json(c.pipeline.ehcc)},
          {"admittance", to_json(c.pipeline.interaction.admittance)},
          {"safety", to_json(c.pipeline.interaction.safety, c.pipeline.interaction.emergency_policy)},
          {"force_window", c.pipeline.interaction.force_window},
          {"hfc", to_json(c.pipeline.hfc)},
          {"engagement",
           {{"hold", c.pipeline.engagement_hold}, {"timeout", num(c.pipeline.engagement_timeout)}}},
          {"world", to_json(c.world)},
          {"script", to_json(c.script)}};
}

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig e;
  if (!j.is_object()) {
    throw ConfigError("", "expected an object");
  }
  if (!child(j, "trials")) {
    e.trials.push_back(parse_scenario_config(j));
    e.name = e.trials.front().name;
    return e;
  }
  check_keys(j, "", {"name", "base", "trials"});
  if (const json* v = child(j, "name")) e.name = detail::string(*v, "/name");
  const json base = child(j, "base") ? *child(j, "base") : json::object();
  if (!base.is_object()) throw ConfigError("/base", "expected an object");
  const json& trials = *child(j, "trials");
  if (!trials.is_array() || trials.empty()) {
    throw ConfigError("/trials", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const std::string tp = "/trials/" + std::to_string(i);
    if (!trials[i].is_object()) throw ConfigError(tp, "expected an object");
    json merged = base;
    merged.merge_patch(trials[i]);
    e.trials.push_back(parse_scenario_config(merged, tp));
  }
  return e;
}

json to_json(const ExperimentConfig& e) {
  json trials = json::array();
  for (const ScenarioConfig& c : e.trials) trials.push_back(to_json(c));
  return {{"name", e.name}, {"trials", trials}};
}

json load_json_file(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) {
    throw ConfigError("", "cannot open " + file.string());
  }
  try {
    return json::parse(is);
  } catch (const json::parse_error& err) {
    throw ConfigError("", file.string() + ": " + err.what());
  }
}

std::vector<LogRecord> run_scenario(const ScenarioConfig& cfg) {
  cfg.script.validate();
  TeleopPipeline pipeline(cfg.pipeline, cfg.world);
  pipeline.request_engagement();
  const std::size_t n = cfg.tick_count();
  std::vector<LogRecord> log;
  log.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    log.push_back(pipeline.tick(leader_sample(cfg.script, pipeline.time())));
  }
  return log;
}

std::vector<LogRecord> run_pose_stream(const PipelineParams& params, const WorldConfig& world,
                                       const PoseStream& stream) {
  TeleopPipeline pipeline(params, world);
  std::vector<LogRecord> log;
  log.reserve(stream.stylus.size());
  for (std::size_t k = 0; k < stream.stylus.size(); ++k) {
    if (k == stream.engage_request_tick) {
      pipeline.request_engagement();
    }
    log.push_back(pipeline.tick(stream.stylus[k]));
  }
  return log;
}

ComparisonReport compare_scenarios(const std::vector<LogRecord>& a, const std::vector<LogRecord>& b,
                                   const ComparisonOptions& options) {
  const auto split = [](const std::vector<LogRecord>& log, std::vector<double>* fa,
                        std::vector<double>* pb) {
    for (const LogRecord& r : log) {
      if (!r.engaged) continue;
      fa->push_back(r.a);
      pb->push_back(r.b);
    }
  };
  std::vector<double> fa, pa, fb, pb;
  split(a, &fa, &pa);
  split(b, &fb, &pb);

  ComparisonReport r;
  r.options = options;
  r.records_a = fa.size();
  r.records_b = fb.size();
  r.bins_a = bin_conditional_stats(fa, pa, options.b_min, options.b_max, options.b_step);
  r.bins_b = bin_conditional_stats(fb, pb, options.b_min, options.b_max, options.b_step);
  for (std::size_t i = 0; i < r.bins_a.bins.size(); ++i) {
    const BinStat& sa = r.bins_a.bins[i];
    const BinStat& sb = r.bins_b.bins[i];
    if (sa.count < options.min_count || sb.count < options.min_count) continue;
    r.used_bins.push_back(i);
    r.means_a.push_back(sa.mean);
    r.means_b.push_back(sb.mean);
    if (sb.mean > sa.mean) r.dominance_violations.push_back(i);
  }
  try {
    r.welch = welch_t(r.means_b, r.means_a);
    r.cohen = cohens_d(r.means_b, r.means_a);
    r.levene = levene_test(r.means_b, r.means_a);
  } catch (const std::exception& e) {
    r.test_error = e.what();
  }
  return r;
}

json to_json(const ComparisonReport& r) {
  json j;
  j["options"] = {{"b_min", r.options.b_min},
                  {"b_max", r.options.b_max},
                  {"b_step", r.options.b_step},
                  {"min_count", r.options.min_count}};
  j["records"] = {{"A", r.records_a}, {"B", r.records_b}};
  j["bins_total"] = r.bins_a.bins.size();
  j["bins_used"] = r.used_bins;
  j["dominance"] = r.dominance();
  j["dominance_violations"] = r.dominance_violations;
  if (r.welch) j["welch"] = {{"t", r.welch->t}, {"dof", r.welch->dof}, {"p", r.welch->p}};
  if (r.cohen) {
    j["cohens_d"] = {{"d", r.cohen->d}, {"ci95", {r.cohen->ci_low, r.cohen->ci_high}}};
  }
  if (r.levene) j["levene"] = {{"W", r.levene->w}, {"p", r.levene->p}};
  if (!r.test_error.empty()) j["test_error"] = r.test_error;
  return j;
}

std::string bins_csv(const ComparisonReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "bin,lower,upper,center,count_a,mean_a,var_a,count_b,mean_b,var_b\n";
  for (std::size_t i = 0; i < r.bins_a.bins.size(); ++i) {
    const BinStat& a = r.bins_a.bins[i];
    const BinStat& b = r.bins_b.bins[i];
    os << i << ',' << a.lower << ',' << a.upper << ',' << a.center << ',' << a.count << ','
       << a.mean << ',' << a.variance << ',' << b.count << ',' << b.mean << ',' << b.variance
       << '\n';
  }
  return os.str();
}

}  // namespace teleop
