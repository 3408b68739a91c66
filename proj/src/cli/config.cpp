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
#include <functional>
#include <set>
#include <sstream>
#include <string_view>

#include <openssl/evp.h>

#include "drbo/cli.hpp"
#include "drbo/errors.hpp"

namespace drbo::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) throw ConfigError("'" + text + "' is not a finite number");
  return v;
}

std::uint64_t parse_count(const std::string& text) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
    throw ConfigError("'" + text + "' is not a nonnegative integer");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError("'" + text + "' is out of range");
  }
}

std::string normalize_bool(const std::string& text) {
  const auto v = lower(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return "true";
  if (v == "false" || v == "0" || v == "no" || v == "off") return "false";
  throw ConfigError("'" + text + "' is not a boolean");
}

std::string normalize_choice(const std::string& text, std::initializer_list<std::string_view> options) {
  const auto v = lower(text);
  std::string valid;
  for (auto option : options) {
    if (v == option) return v;
    if (!valid.empty()) valid += ", ";
    valid += option;
  }
  throw ConfigError("'" + text + "' is not one of: " + valid);
}

std::string normalize_nonneg_real(const std::string& text) {
  const double v = parse_real(text);
  if (v < 0.0) throw ConfigError("'" + text + "' must be >= 0");
  return format_real(v);
}

std::string normalize_positive_count(const std::string& text) {
  const auto v = parse_count(text);
  if (v == 0) throw ConfigError("'" + text + "' must be >= 1");
  return std::to_string(v);
}

std::string normalize_acquisitions(const std::string& text) {
  std::string out;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto name = lower(trim(item));
    const auto kind = AcquisitionKind::from_string(name);
    if (!seen.insert(kind.name()).second) throw ConfigError("acquisition '" + name + "' listed twice");
    if (!out.empty()) out += ",";
    out += kind.name();
  }
  if (out.empty()) throw ConfigError("no acquisition given");
  return out;
}

using Normalizer = std::function<std::string(const std::string&)>;

struct KeyDef {
  KeyInfo info;
  Normalizer normalize;
};

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = {
      {{"benchmark", "gap", "benchmark function"},
       [](const std::string& v) { return make_benchmark(lower(v)).name(); }},
      {{"acquisition", "dro_tv", "acquisition, or a comma list (one config each)"}, normalize_acquisitions},
      {{"divergence", "tv", "divergence for baseline regret and adaptive radius"},
       [](const std::string& v) { return std::string(to_string(divergence_from_string(lower(v)))); }},
      {{"schedule", "fixed", "radius schedule: fixed or adaptive"},
       [](const std::string& v) { return normalize_choice(v, {"fixed", "adaptive"}); }},
      {{"eps", "0.5", "fixed radius"}, normalize_nonneg_real},
      {{"iterations", "50", "BO iterations T"}, normalize_positive_count},
      {{"initial_points", "auto", "initial design size, or auto for 3*(d_x+1)"},
       [](const std::string& v) { return lower(v) == "auto" ? std::string("auto") : normalize_positive_count(v); }},
      {{"contexts", "30", "contexts sampled per iteration"},
       [](const std::string& v) {
         const auto n = parse_count(v);
         if (n < 2) throw ConfigError("'" + v + "' must be >= 2");
         return std::to_string(n);
       }},
      {{"context_sampling", "random", "random or grid"},
       [](const std::string& v) { return normalize_choice(v, {"random", "grid"}); }},
      {{"exploration", "constant", "constant or log"},
       [](const std::string& v) { return normalize_choice(v, {"constant", "log"}); }},
      {{"sqrt_beta", "2", "sqrt(beta), or the scale of the log schedule"}, normalize_nonneg_real},
      {{"kernel", "se", "se or matern52"},
       [](const std::string& v) { return std::string(to_string(kernel_kind_from_string(lower(v)))); }},
      {{"gp_noise_variance", "0.01", "GP observation noise variance"}, normalize_nonneg_real},
      {{"center_y", "false", "subtract the target mean before fitting"}, normalize_bool},
      {{"baseline_model", "joint", "ucb surrogate: joint (x, c) GP or input_only"},
       [](const std::string& v) { return normalize_choice(v, {"joint", "input_only"}); }},
      {{"noise_sigma", "0", "observation noise std of the benchmark"}, normalize_nonneg_real},
      {{"seed", "0", "base seed"}, [](const std::string& v) { return std::to_string(parse_count(v)); }},
      {{"repeats", "1", "seeded repeats per config"}, normalize_positive_count},
      {{"x_grid", "200", "regret grid points per input dimension"}, normalize_positive_count},
      {{"c_grid", "101", "regret grid contexts"}, normalize_positive_count},
      {{"candidates", "256", "random starts of the acquisition maximizer"}, normalize_positive_count},
      {{"refine", "true", "local refinement after the random starts"}, normalize_bool},
      {{"kl_lambda", "grid", "KL multiplier: grid or a fixed positive value"},
       [](const std::string& v) {
         if (lower(v) == "grid") return std::string("grid");
         const double l = parse_real(v);
         if (!(l > 0.0)) throw ConfigError("'" + v + "' must be > 0");
         return format_real(l);
       }},
      {{"timing", "false", "record wall clock per iteration"}, normalize_bool},
  };
  return defs;
}

const KeyDef* find_key(const std::string& name) {
  for (const auto& def : key_defs()) {
    if (def.info.name == name) return &def;
  }
  return nullptr;
}

[[noreturn]] void throw_errors(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

}  // namespace

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> out;
    for (const auto& def : key_defs()) out.push_back(def.info);
    return out;
  }();
  return keys;
}

ParsedConfig parse_config(const std::string& text) {
  ParsedConfig parsed;
  auto& out = parsed.values;
  auto& errors = parsed.errors;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const auto where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + body + "'");
      continue;
    }
    const auto key = lower(trim(std::string_view(body).substr(0, eq)));
    const auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      errors.push_back(where + "missing key");
    } else if (find_key(key) == nullptr) {
      errors.push_back(where + "unknown key '" + key + "'");
    } else if (value.empty()) {
      errors.push_back(where + "key '" + key + "' has no value");
    } else if (!out.emplace(key, value).second) {
      errors.push_back(where + "duplicate key '" + key + "'");
    }
  }
  return parsed;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  auto parsed = parse_config(text);
  if (!parsed.errors.empty()) throw_errors(parsed.errors);
  return std::move(parsed.values);
}

Suite resolve_suite(const std::map<std::string, std::string>& file,
                    const std::map<std::string, std::string>& overrides,
                    const std::vector<std::string>& prior_errors) {
  std::map<std::string, std::string> raw;
  for (const auto& def : key_defs()) raw[def.info.name] = def.info.default_value;
  std::vector<std::string> errors = prior_errors;
  for (const auto* layer : {&file, &overrides}) {
    for (const auto& [key, value] : *layer) {
      if (find_key(key) == nullptr) {
        errors.push_back(key + ": unknown key");
        continue;
      }
      raw[key] = value;
    }
  }

  Suite suite;
  for (const auto& def : key_defs()) {
    try {
      suite.settings[def.info.name] = def.normalize(trim(raw[def.info.name]));
    } catch (const ConfigError& e) {
      errors.push_back(def.info.name + ": " + e.what());
    }
  }
  if (!errors.empty()) throw_errors(errors);

  const auto& s = suite.settings;
  ExperimentConfig base;
  base.benchmark = s.at("benchmark");
  base.divergence = divergence_from_string(s.at("divergence"));
  base.schedule = s.at("schedule") == "adaptive" ? ScheduleKind::Adaptive : ScheduleKind::Fixed;
  base.eps = std::stod(s.at("eps"));
  base.iterations = std::stoull(s.at("iterations"));
  base.initial_points = s.at("initial_points") == "auto" ? 0 : std::stoull(s.at("initial_points"));
  base.contexts = std::stoull(s.at("contexts"));
  base.context_grid = s.at("context_sampling") == "grid";
  const double sqrt_beta = std::stod(s.at("sqrt_beta"));
  base.exploration = s.at("exploration") == "log" ? ExplorationSchedule::log_growth(sqrt_beta)
                                                  : ExplorationSchedule::constant(sqrt_beta);
  base.kernel = kernel_kind_from_string(s.at("kernel"));
  base.gp_noise_variance = std::stod(s.at("gp_noise_variance"));
  base.center_targets = s.at("center_y") == "true";
  base.ucb_input_only = s.at("baseline_model") == "input_only";
  base.noise_sigma = std::stod(s.at("noise_sigma"));
  base.seed = std::stoull(s.at("seed"));
  base.x_grid = std::stoull(s.at("x_grid"));
  base.c_grid = std::stoull(s.at("c_grid"));
  base.maximizer.budget = std::stoull(s.at("candidates"));
  base.maximizer.refine = s.at("refine") == "true";
  base.timing = s.at("timing") == "true";
  suite.repeats = std::stoull(s.at("repeats"));

  std::stringstream names(s.at("acquisition"));
  std::string name;
  while (std::getline(names, name, ',')) {
    ExperimentConfig cfg = base;
    cfg.acquisition = AcquisitionKind::from_string(name);
    if (cfg.acquisition.tag == AcquisitionTag::DroKl && s.at("kl_lambda") != "grid") {
      cfg.acquisition.kl_lambda = std::stod(s.at("kl_lambda"));
    }
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      errors.push_back(name + ": " + e.what());
    }
    suite.configs.push_back(std::move(cfg));
  }
  if (!errors.empty()) throw_errors(errors);
  return suite;
}

std::string canonical_text(const std::map<std::string, std::string>& settings) {
  std::string out;
  for (const auto& def : key_defs()) {
    const auto it = settings.find(def.info.name);
    if (it == settings.end()) continue;
    out += def.info.name + " = " + it->second + "\n";
  }
  return out;
}

std::string git_blob_hash(const std::string& text) {
  const std::string blob = "blob " + std::to_string(text.size()) + std::string(1, '\0') + text;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("sha1 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

}  // namespace drbo::cli
