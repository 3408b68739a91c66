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


#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drbo/engine.hpp"
#include "drbo/verify.hpp"

namespace drbo::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verify found a failing check
  kExitConfig = 2,
  kExitNumerical = 3,  // every run failed
  kExitPartial = 4,    // some runs failed
};

struct KeyInfo {
  std::string name;
  std::string default_value;
  std::string help;
};

// Every recognised config key, in canonical order.
const std::vector<KeyInfo>& config_keys();

struct ParsedConfig {
  std::map<std::string, std::string> values;
  std::vector<std::string> errors;  // malformed lines, duplicate and unknown keys
};

// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
ParsedConfig parse_config(const std::string& text);
// Throws ConfigError listing every problem.
std::map<std::string, std::string> parse_config_text(const std::string& text);

struct Suite {
  std::map<std::string, std::string> settings;  // normalized, every key present
  std::vector<ExperimentConfig> configs;        // one per acquisition
  std::size_t repeats = 1;
};

// Defaults, then `file`, then `overrides`. Values are validated and
// normalized; all offending keys, plus `prior_errors`, are listed in the
// thrown ConfigError.
Suite resolve_suite(const std::map<std::string, std::string>& file,
                    const std::map<std::string, std::string>& overrides,
                    const std::vector<std::string>& prior_errors = {});

std::string canonical_text(const std::map<std::string, std::string>& settings);

// SHA-1 of "blob <size>\0<text>", hex encoded.
std::string git_blob_hash(const std::string& text);

std::string run_id(const ExperimentConfig& config, std::size_t repeat);

void write_results_csv(std::ostream& os, const Suite& suite, const std::vector<SuiteEntry>& entries);

std::string manifest_json(const Suite& suite, const std::map<std::string, std::string>& overrides,
                          const std::vector<SuiteEntry>& entries, const std::string& results_file,
                          const std::string& timestamp);

void print_verify_table(std::ostream& os, const std::vector<VerifyCheck>& checks);

// Full command line entry point. `forms` replaces the closed forms exercised
// by `verify`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const ClosedForms& forms = ClosedForms::reference());

}  // namespace drbo::cli
