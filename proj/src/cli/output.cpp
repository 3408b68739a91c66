// Copyright 2026 The drbo Authors
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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "drbo/cli.hpp"

namespace drbo::cli {
namespace {

void put_real(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  os << buf;
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["label"] = c.resolved_label();
  j["benchmark"] = c.benchmark;
  j["acquisition"] = c.acquisition.name();
  if (c.acquisition.kl_lambda) j["kl_lambda"] = *c.acquisition.kl_lambda;
  j["regret_divergence"] = std::string(to_string(c.regret_divergence()));
  j["schedule"] = c.schedule == ScheduleKind::Adaptive ? "adaptive" : "fixed";
  j["eps"] = c.eps;
  j["iterations"] = c.iterations;
  j["initial_points"] = c.resolved_initial_points();
  j["contexts"] = c.contexts;
  j["context_sampling"] = c.context_grid ? "grid" : "random";
  j["exploration"] = c.exploration.kind() == ExplorationSchedule::Kind::LogGrowth ? "log" : "constant";
  j["sqrt_beta"] = c.exploration.value();
  j["kernel"] = std::string(to_string(c.kernel));
  j["gp_noise_variance"] = c.gp_noise_variance;
  j["center_y"] = c.center_targets;
  j["baseline_model"] = c.ucb_input_only ? "input_only" : "joint";
  j["noise_sigma"] = c.noise_sigma;
  j["base_seed"] = c.seed;
  j["x_grid"] = c.x_grid;
  j["c_grid"] = c.c_grid;
  j["candidates"] = c.maximizer.budget;
  j["refine"] = c.maximizer.refine;
  j["timing"] = c.timing;
  return j;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

nlohmann::ordered_json final_regret_summary(const std::vector<double>& finals) {
  nlohmann::ordered_json j;
  j["runs"] = finals.size();
  if (finals.empty()) return j;
  const double n = static_cast<double>(finals.size());
  double mean = 0.0;
  for (double v : finals) mean += v / n;
  double ss = 0.0;
  for (double v : finals) ss += (v - mean) * (v - mean);
  j["mean"] = mean;
  j["stderr"] = finals.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  j["median"] = quantile(finals, 0.5);
  j["q25"] = quantile(finals, 0.25);
  j["q75"] = quantile(finals, 0.75);
  return j;
}

}  // namespace

std::string run_id(const ExperimentConfig& config, std::size_t repeat) {
  return config.resolved_label() + "#" + std::to_string(repeat);
}

void write_results_csv(std::ostream& os, const Suite& suite, const std::vector<SuiteEntry>& entries) {
  const std::size_t dx = suite.configs.empty() ? 1 : make_benchmark(suite.configs.front().benchmark).input_dim();
  os << "run_id,seed,iter";
  for (std::size_t d = 0; d < dx; ++d) os << ",x_" << d;
  os << ",c,y,eps_t,r_t,R_t,wall_ms\n";
  for (const auto& entry : entries) {
    if (!entry.record) continue;
    const auto id = run_id(suite.configs[entry.config_index], entry.repeat);
    std::size_t t = 0;
    for (const auto& it : entry.record->iterations) {
      os << id << ',' << entry.seed << ',' << ++t;
      for (double v : it.x) {
        os << ',';
        put_real(os, v);
      }
      for (double v : {it.c, it.y, it.eps, it.regret, it.cumulative_regret, it.wall_ms}) {
        os << ',';
        put_real(os, v);
      }
      os << '\n';
    }
  }
}

std::string manifest_json(const Suite& suite, const std::map<std::string, std::string>& overrides,
                          const std::vector<SuiteEntry>& entries, const std::string& results_file,
                          const std::string& timestamp) {
  nlohmann::ordered_json j;
  const auto text = canonical_text(suite.settings);
  j["schema_version"] = 1;
  j["timestamp"] = timestamp;
  j["config_hash"] = git_blob_hash(text);
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  for (const auto& key : config_keys()) settings[key.name] = suite.settings.at(key.name);
  j["settings"] = settings;
  j["overrides"] = nlohmann::ordered_json(overrides);
  j["repeats"] = suite.repeats;
  j["configs"] = nlohmann::ordered_json::array();
  for (const auto& c : suite.configs) j["configs"].push_back(config_json(c));
  j["results"] = results_file;
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& entry : entries) {
    nlohmann::ordered_json run;
    run["run_id"] = run_id(suite.configs[entry.config_index], entry.repeat);
    run["config_index"] = entry.config_index;
    run["repeat"] = entry.repeat;
    run["seed"] = entry.seed;
    run["status"] = entry.record ? "ok" : "failed";
    if (entry.record) {
      run["final_regret"] = entry.record->final_regret();
    } else {
      run["error"] = entry.error;
    }
    j["runs"].push_back(std::move(run));
  }
  j["final_regret"] = nlohmann::ordered_json::array();
  for (std::size_t ci = 0; ci < suite.configs.size(); ++ci) {
    std::vector<double> finals;
    for (const auto& entry : entries) {
      if (entry.config_index == ci && entry.record) finals.push_back(entry.record->final_regret());
    }
    auto summary = final_regret_summary(finals);
    summary["label"] = suite.configs[ci].resolved_label();
    j["final_regret"].push_back(std::move(summary));
  }
  return j.dump(2) + "\n";
}

}  // namespace drbo::cli
