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
#include <vector>

#include "drbo/acquisition.hpp"
#include "drbo/benchmarks.hpp"
#include "drbo/divergence.hpp"
#include "drbo/kernels_gp.hpp"

namespace drbo {

enum class ScheduleKind { Fixed, Adaptive };

struct ExperimentConfig {
  std::string benchmark = "gap";
  AcquisitionKind acquisition;
  // Ambiguity set used for robust regret (and for the adaptive radius) when
  // the acquisition is a baseline. Robust acquisitions use their own divergence.
  Divergence divergence = Divergence::TotalVariation;
  ScheduleKind schedule = ScheduleKind::Fixed;
  double eps = 0.5;
  std::size_t iterations = 50;
  std::size_t initial_points = 0;  // 0 selects 3 * (d_x + 1)
  std::size_t contexts = 30;
  bool context_grid = false;  // evenly spaced contexts instead of iid draws
  ExplorationSchedule exploration = ExplorationSchedule::constant(2.0);
  KernelKind kernel = KernelKind::SquaredExponential;
  double gp_noise_variance = 1e-2;
  bool center_targets = false;
  bool ucb_input_only = false;  // Ucb fits its GP on x alone, ignoring observed contexts
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t x_grid = 200;  // per input dimension
  std::size_t c_grid = 101;
  MaximizerOptions maximizer;
  bool timing = false;  // wall clock is recorded only when set, keeping output reproducible
  std::string label;    // empty selects the acquisition name

  void validate() const;
  Divergence regret_divergence() const;
  RadiusSchedule radius_schedule() const;
  BenchmarkFunction make_function() const;
  std::size_t resolved_initial_points() const;
  std::string resolved_label() const;
};

struct IterationRecord {
  std::vector<double> x;
  double c = 0.0;
  double y = 0.0;
  double eps = 0.0;
  double regret = 0.0;
  double cumulative_regret = 0.0;
  std::vector<double> x_star;
  double wall_ms = 0.0;
  double acq_ms = 0.0;  // time spent inside the acquisition maximizer
};

struct RegretRecord {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> iterations;
  std::size_t dataset_size = 0;

  double final_regret() const { return iterations.empty() ? 0.0 : iterations.back().cumulative_regret; }
};

// Evenly spaced points covering [lo, hi]; the midpoint when count is 1.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Robust value of the true objective on fixed grids.
///
/// Caches f over x_grid x c_grid once; the inner infimum uses the closed form
/// of the chosen divergence with uniform weights on the context grid. The
/// grid argmax is recomputed only when eps changes.
class RobustRegretOracle {
 public:
  RobustRegretOracle(const BenchmarkFunction& fn, Divergence kind, std::vector<std::vector<double>> x_points,
                     std::vector<double> c_points, std::vector<double> lambda_grid = default_kl_lambda_grid());
  // Tensor grid with `x_per_dim` points per input dimension and `c_count` contexts.
  static RobustRegretOracle on_grid(const BenchmarkFunction& fn, Divergence kind, std::size_t x_per_dim,
                                    std::size_t c_count);

  struct Step {
    double regret = 0.0;
    std::vector<double> x_star;
  };

  Step step(double eps, std::span<const double> x_t);
  double robust_value_at(std::span<const double> x, double eps) const;
  std::size_t grid_size() const { return x_points_.size(); }

 private:
  void refresh(double eps);

  BenchmarkFunction fn_;
  Divergence kind_;
  std::vector<std::vector<double>> x_points_;
  std::vector<double> c_points_;
  std::vector<double> weights_;
  std::vector<double> lambda_grid_;
  std::vector<double> values_;  // row-major x_points x c_points
  std::optional<double> cached_eps_;
  std::size_t best_index_ = 0;
  double best_value_ = 0.0;
};

// One-shot robust regret of x_t against the grid maximizer.
RobustRegretOracle::Step robust_regret_step(const BenchmarkFunction& fn, Divergence kind, double eps_t,
                                            std::span<const double> x_t,
                                            const std::vector<std::vector<double>>& x_grid,
                                            const std::vector<double>& c_grid);

RegretRecord run_drbo(const ExperimentConfig& config);

struct SuiteEntry {
  std::size_t config_index = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::optional<RegretRecord> record;
  std::string error;  // set when the run failed
};

std::uint64_t suite_seed(std::uint64_t base_seed, std::size_t config_index, std::size_t repeat);

// Runs configs x repeats on `jobs` worker threads. Output is ordered by
// (config, repeat) and does not depend on the number of workers.
std::vector<SuiteEntry> run_suite(const std::vector<ExperimentConfig>& configs, std::size_t repeats,
                                  std::size_t jobs);

}  // namespace drbo
