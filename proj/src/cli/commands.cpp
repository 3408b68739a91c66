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


#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drbo/cli.hpp"
#include "drbo/errors.hpp"

namespace drbo::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kResultsFile = "results.csv";
constexpr const char* kManifestFile = "manifest.json";

struct RunArgs {
  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 1;
  bool force = false;
  bool dry_run = false;
  std::vector<std::string> key_values;  // parallel to config_keys()
};

struct VerifyArgs {
  std::string divergence;
  std::string profile = "default";
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DRBO_OUT"); env != nullptr && *env != '\0') return env;
  return "drbo_out";
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  std::map<std::string, std::string> overrides;
  const auto& keys = config_keys();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!args.key_values[i].empty()) overrides[keys[i].name] = args.key_values[i];
  }

  Suite suite;
  try {
    const auto file = args.config_path.empty() ? ParsedConfig{} : parse_config(read_file(args.config_path));
    suite = resolve_suite(file.values, overrides, file.errors);
  } catch (const ConfigError& e) {
    err << "drbo run: " << e.what() << "\n";
    return kExitConfig;
  }

  const fs::path dir = resolve_out_dir(args.out_dir);
  const auto text = canonical_text(suite.settings);
  if (args.dry_run) {
    out << text;
    out << "# config_hash " << git_blob_hash(text) << "\n";
    out << "# configs " << suite.configs.size() << ", repeats " << suite.repeats << ", runs "
        << suite.configs.size() * suite.repeats << "\n";
    out << "# output " << dir.string() << " (not written)\n";
    return kExitOk;
  }

  std::error_code ec;
  if (!args.force && (fs::exists(dir / kResultsFile, ec) || fs::exists(dir / kManifestFile, ec))) {
    err << "drbo run: " << dir.string() << " already holds results; pass --force to overwrite\n";
    return kExitConfig;
  }
  fs::create_directories(dir, ec);
  if (ec) {
    err << "drbo run: cannot create " << dir.string() << ": " << ec.message() << "\n";
    return kExitConfig;
  }

  const std::size_t jobs = args.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : args.jobs;
  const auto entries = run_suite(suite.configs, suite.repeats, jobs);

  std::size_t failed = 0;
  for (const auto& entry : entries) {
    if (entry.record) continue;
    ++failed;
    err << "drbo run: " << run_id(suite.configs[entry.config_index], entry.repeat) << " (seed " << entry.seed
        << ") failed: " << entry.error << "\n";
  }

  {
    std::ofstream csv(dir / kResultsFile, std::ios::binary | std::ios::trunc);
    write_results_csv(csv, suite, entries);
    std::ofstream manifest(dir / kManifestFile, std::ios::binary | std::ios::trunc);
    manifest << manifest_json(suite, overrides, entries, kResultsFile, utc_timestamp());
    if (!csv || !manifest) {
      err << "drbo run: failed writing to " << dir.string() << "\n";
      return kExitConfig;
    }
  }

  out << "wrote " << (dir / kResultsFile).string() << " (" << entries.size() - failed << "/" << entries.size()
      << " runs ok)\n";
  if (failed == 0) return kExitOk;
  return failed == entries.size() ? kExitNumerical : kExitPartial;
}

int cmd_verify(const VerifyArgs& args, const ClosedForms& forms, std::ostream& out) {
  std::optional<Divergence> only;
  if (!args.divergence.empty()) only = divergence_from_string(args.divergence);
  const auto checks = run_verification(VerifyProfile::named(args.profile), only, forms);
  print_verify_table(out, checks);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
  return ok ? kExitOk : kExitFailure;
}

int cmd_list(bool json, std::ostream& out) {
  const std::vector<std::string> acquisitions = {"dro_chi2", "dro_tv", "dro_kl", "ucb", "stableopt", "random"};
  const std::vector<std::string> divergences = {"chi2", "tv", "kl"};
  const std::vector<std::string> schedules = {"fixed", "adaptive"};
  const std::vector<std::string> kernels = {"se", "matern52"};
  if (json) {
    nlohmann::ordered_json j;
    j["benchmarks"] = benchmark_names();
    j["acquisitions"] = acquisitions;
    j["divergences"] = divergences;
    j["schedules"] = schedules;
    j["kernels"] = kernels;
    nlohmann::ordered_json keys = nlohmann::ordered_json::object();
    for (const auto& key : config_keys()) keys[key.name] = key.default_value;
    j["config_keys"] = keys;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  const auto line = [&out](const char* title, const std::vector<std::string>& items) {
    out << title << ":";
    for (const auto& item : items) out << " " << item;
    out << "\n";
  };
  line("benchmarks", benchmark_names());
  line("acquisitions", acquisitions);
  line("divergences", divergences);
  line("schedules", schedules);
  line("kernels", kernels);
  out << "config keys:\n";
  for (const auto& key : config_keys()) {
    out << "  " << std::left << std::setw(18) << key.name << " " << std::setw(8) << key.default_value << " "
        << key.help << "\n";
  }
  return kExitOk;
}

}  // namespace

void print_verify_table(std::ostream& os, const std::vector<VerifyCheck>& checks) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-32s %12s %12s %8s  %s\n", "check", "worst", "tolerance", "cases", "result");
  os << buf;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-32s %12.4e %12.4e %8zu  %s\n", c.name.c_str(), c.worst, c.tolerance, c.cases,
                  c.passed ? "PASS" : "FAIL");
    os << buf;
    passed += c.passed ? 1 : 0;
  }
  os << passed << "/" << checks.size() << " checks passed\n";
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const ClosedForms& forms) {
  CLI::App app{"Distributionally robust Bayesian optimization experiments", "drbo"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an experiment suite and write results.csv + manifest.json");
  run->add_option("--config", run_args.config_path, "flat key = value config file");
  run->add_option("--out", run_args.out_dir, "output directory (default $DRBO_OUT or drbo_out)");
  run->add_option("--jobs", run_args.jobs, "worker threads, 0 for all cores")->capture_default_str();
  run->add_flag("--force", run_args.force, "overwrite existing results");
  run->add_flag("--dry-run", run_args.dry_run, "print the resolved config and exit");
  const auto& keys = config_keys();
  run_args.key_values.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::string names = "--" + keys[i].name;
    if (keys[i].name.find('_') != std::string::npos) {
      auto dashed = keys[i].name;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      names += ",--" + dashed;
    }
    run->add_option(names, run_args.key_values[i], keys[i].help + " (default " + keys[i].default_value + ")")
        ->group("Config overrides");
  }

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check closed-form robust values against the simplex oracle");
  verify->add_option("--divergence", verify_args.divergence, "restrict to one divergence")
      ->check(CLI::IsMember({"chi2", "tv", "kl"}));
  verify->add_option("--profile", verify_args.profile, "tolerance profile")
      ->check(CLI::IsMember({"default", "quick"}))
      ->capture_default_str();

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list benchmarks, acquisitions, divergences and config keys");
  list->add_flag("--json", list_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args, out, err);
    if (*verify) return cmd_verify(verify_args, forms, out);
    if (*list) return cmd_list(list_json, out);
  } catch (const ConfigError& e) {
    err << "drbo: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "drbo: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace drbo::cli
