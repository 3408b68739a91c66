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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drbo/divergence.hpp"
#include "drbo/kernels_gp.hpp"

namespace drbo {

// sqrt(beta_t): either a constant or scale * sqrt(2 log(t^2 pi^2 / 6)).
class ExplorationSchedule {
 public:
  enum class Kind { Constant, LogGrowth };

  static ExplorationSchedule constant(double sqrt_beta);
  static ExplorationSchedule log_growth(double scale);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  double sqrt_beta(std::size_t t) const;

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 2.0;
};

enum class AcquisitionTag { DroChi2, DroTv, DroKl, Ucb, StableOpt, Random };

struct AcquisitionKind {
  AcquisitionTag tag = AcquisitionTag::DroTv;
  // DroKl only: fixed multiplier instead of maximizing over the lambda grid.
  std::optional<double> kl_lambda;

  static AcquisitionKind from_string(std::string_view name);
  std::string name() const;
  bool is_robust() const;
  // Divergence implied by a robust kind.
  std::optional<Divergence> divergence() const;
};

struct AcquisitionContext {
  const Surrogate* surrogate = nullptr;
  ContextSet contexts;
  double eps = 0.0;
  double sqrt_beta = 2.0;
  std::vector<double> kl_lambda_grid = default_kl_lambda_grid();
};

struct InputBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  void validate() const;
};

// Score of one input from its per-context predictive means and standard deviations.
double acquisition_score(const AcquisitionKind& kind, std::span<const double> mean, std::span<const double> stddev,
                         std::span<const double> weights, double eps, double sqrt_beta,
                         std::span<const double> kl_lambda_grid);

double acq_value(const AcquisitionKind& kind, const AcquisitionContext& ctx, std::span<const double> x);

// Batched acq_value; xs holds one input per row.
std::vector<double> acq_values(const AcquisitionKind& kind, const AcquisitionContext& ctx,
                               const std::vector<std::vector<double>>& xs);

struct MaximizerOptions {
  std::size_t budget = 256;
  bool refine = true;
  int passes = 3;
};

/// Random multi-start followed by compass-style coordinate refinement.
///
/// Draws `budget` uniform candidates and keeps the best (lowest index on
/// ties). Refinement runs `passes` sweeps; sweep k starts at a step of
/// 10% of each box width divided by 2^k and halves the step three times
/// within the sweep. Deterministic for a given seed. The Random kind returns
/// a single uniform draw.
std::vector<double> maximize_acq(const AcquisitionKind& kind, const AcquisitionContext& ctx, const InputBox& box,
                                 const MaximizerOptions& options, std::uint64_t seed);

}  // namespace drbo
