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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drbo/divergence.hpp"

namespace drbo {

// Closed-form robust values under test; swappable so a broken formula can be
// shown to fail the suite.
struct ClosedForms {
  using Fn = std::function<double(std::span<const double>, std::span<const double>, double)>;
  Fn chi2;
  Fn tv;
  Fn kl;

  static ClosedForms reference();
  const Fn& get(Divergence kind) const;
};

struct VerifyProfile {
  std::size_t instances = 50;
  std::size_t atoms = 3;
  std::vector<double> eps_values = {0.01, 0.05, 0.1};
  double oracle_step = 0.005;
  double tolerance_chi2_tv = 1e-2;
  double tolerance_kl = 2e-2;
  std::size_t dual_grid = 40;  // lambda x b points
  double dual_tolerance = 1e-3;
  std::uint64_t seed = 20260101;

  static VerifyProfile named(const std::string& name);  // "default" or "quick"
};

struct VerifyCheck {
  std::string name;
  Divergence kind = Divergence::Chi2;
  bool passed = false;
  double worst = 0.0;  // largest observed violation measure
  double tolerance = 0.0;
  std::size_t cases = 0;
};

/// Closed form vs. simplex oracle, weak duality of the dual objective on a
/// (lambda, b) grid, monotonicity in eps, and dominance by the mean, for every
/// divergence (or only `only`). Random f vectors are uniform on [-1, 1] with
/// uniform weights.
std::vector<VerifyCheck> run_verification(const VerifyProfile& profile, std::optional<Divergence> only = {},
                                          const ClosedForms& forms = ClosedForms::reference());

}  // namespace drbo
