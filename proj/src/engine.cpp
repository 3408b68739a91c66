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

#include "drbo/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "drbo/errors.hpp"

namespace drbo {
namespace {

using Clock = std::chrono::steady_clock;

class InputOnlySurrogate final : public Surrogate {
 public:
  explicit InputOnlySurrogate(const GpPosterior& gp) : gp_(gp) {}
  std::size_t joint_dim() const override { return gp_.joint_dim() + 1; }
  void predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                     Eigen::VectorXd& variance) const override {
    gp_.predict_batch(queries.leftCols(queries.cols() - 1), mean, variance);
  }

 private:
  const GpPosterior& gp_;
};

double target_scale(const Eigen::VectorXd& y) {
  if (y.size() < 2) return 1.0;
  const double var = (y.array() - y.mean()).square().mean();
  return var > 1e-12 ? var : 1.0;
}

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<std::vector<double>> tensor_grid(const std::vector<Interval>& box, std::size_t per_dim) {
  std::vector<std::vector<double>> axes;
  for (const auto& iv : box) axes.push_back(linspace(iv.lo, iv.hi, per_dim));
  std::vector<std::vector<double>> points(1);
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * axis.size());
    for (const auto& p : points) {
      for (double v : axis) {
        next.push_back(p);
        next.back().push_back(v);
      }
    }
    points = std::move(next);
  }
  return points;
}

bool refit_due(std::size_t t) { return t <= 25 || t % 5 == 0; }

}  // namespace

void ExperimentConfig::validate() const {
  const auto fn = make_benchmark(benchmark);
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (contexts < 2) throw ConfigError("contexts must be >= 2");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be finite and >= 0");
  if (!(gp_noise_variance >= 0.0)) throw ConfigError("gp_noise_variance must be >= 0");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  if (x_grid < 1 || c_grid < 1) throw ConfigError("regret grids must be nonempty");
  if (maximizer.budget < 1) throw ConfigError("candidates must be >= 1");
  if (acquisition.kl_lambda && !(*acquisition.kl_lambda > 0.0)) throw ConfigError("kl_lambda must be > 0");
}

Divergence ExperimentConfig::regret_divergence() const { return acquisition.divergence().value_or(divergence); }

RadiusSchedule ExperimentConfig::radius_schedule() const {
  return schedule == ScheduleKind::Fixed ? RadiusSchedule::fixed(eps) : RadiusSchedule::adaptive(regret_divergence());
}

BenchmarkFunction ExperimentConfig::make_function() const { return make_benchmark(benchmark).with_noise(noise_sigma); }

std::size_t ExperimentConfig::resolved_initial_points() const {
  if (initial_points > 0) return initial_points;
  return 3 * (make_benchmark(benchmark).input_dim() + 1);
}

std::string ExperimentConfig::resolved_label() const { return label.empty() ? acquisition.name() : label; }

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

RobustRegretOracle::RobustRegretOracle(const BenchmarkFunction& fn, Divergence kind,
                                       std::vector<std::vector<double>> x_points, std::vector<double> c_points,
                                       std::vector<double> lambda_grid)
    : fn_(fn.with_noise(0.0)),
      kind_(kind),
      x_points_(std::move(x_points)),
      c_points_(std::move(c_points)),
      lambda_grid_(std::move(lambda_grid)) {
  if (x_points_.empty() || c_points_.empty()) throw ConfigError("regret oracle: grids must be nonempty");
  weights_ = ContextSet::uniform(c_points_).weights;
  values_.reserve(x_points_.size() * c_points_.size());
  for (const auto& x : x_points_) {
    for (double c : c_points_) values_.push_back(fn_.evaluate(x, c));
  }
}

RobustRegretOracle RobustRegretOracle::on_grid(const BenchmarkFunction& fn, Divergence kind, std::size_t x_per_dim,
                                               std::size_t c_count) {
  const auto& ci = fn.context_interval();
  return RobustRegretOracle(fn, kind, tensor_grid(fn.input_box(), x_per_dim), linspace(ci.lo, ci.hi, c_count));
}

void RobustRegretOracle::refresh(double eps) {
  if (cached_eps_ && *cached_eps_ == eps) return;
  const std::size_t m = c_points_.size();
  best_index_ = 0;
  best_value_ = -kPlusInfinity;
  for (std::size_t i = 0; i < x_points_.size(); ++i) {
    const std::span<const double> row(values_.data() + i * m, m);
    const double v = robust_value(kind_, row, weights_, eps, lambda_grid_);
    if (v > best_value_) {
      best_value_ = v;
      best_index_ = i;
    }
  }
  cached_eps_ = eps;
}

double RobustRegretOracle::robust_value_at(std::span<const double> x, double eps) const {
  std::vector<double> row;
  row.reserve(c_points_.size());
  for (double c : c_points_) row.push_back(fn_.evaluate(x, c));
  return robust_value(kind_, row, weights_, eps, lambda_grid_);
}

RobustRegretOracle::Step RobustRegretOracle::step(double eps, std::span<const double> x_t) {
  refresh(eps);
  return {best_value_ - robust_value_at(x_t, eps), x_points_[best_index_]};
}

RobustRegretOracle::Step robust_regret_step(const BenchmarkFunction& fn, Divergence kind, double eps_t,
                                            std::span<const double> x_t,
                                            const std::vector<std::vector<double>>& x_grid,
                                            const std::vector<double>& c_grid) {
  RobustRegretOracle oracle(fn, kind, x_grid, c_grid);
  return oracle.step(eps_t, x_t);
}

RegretRecord run_drbo(const ExperimentConfig& config) {
  config.validate();
  const BenchmarkFunction fn = config.make_function();
  const InputBox box = fn.box();
  const std::size_t dx = fn.input_dim();
  const Interval ci = fn.context_interval();
  const RadiusSchedule schedule = config.radius_schedule();
  const bool needs_model = config.acquisition.tag != AcquisitionTag::Random;
  const bool input_only = config.ucb_input_only && config.acquisition.tag == AcquisitionTag::Ucb;

  std::mt19937_64 rng(config.seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  Dataset data(dx + 1);
  Dataset input_data(dx);
  const auto append = [&](const std::vector<double>& x, double c, double y) {
    data.add(JointInput{x, c}, y);
    input_data.add(x, y);
  };
  for (std::size_t i = 0; i < config.resolved_initial_points(); ++i) {
    std::vector<double> x(dx);
    for (std::size_t d = 0; d < dx; ++d) x[d] = uniform(box.lo[d], box.hi[d]);
    const double c = uniform(ci.lo, ci.hi);
    append(x, c, fn.observe(x, c, rng));
  }
  std::vector<double> model_widths = fn.joint_widths();
  if (input_only) model_widths.pop_back();
  const Dataset& model_data = input_only ? input_data : data;

  const GpOptions gp_options{config.center_targets};
  auto oracle = RobustRegretOracle::on_grid(fn, config.regret_divergence(), config.x_grid, config.c_grid);

  RegretRecord record;
  record.label = config.resolved_label();
  record.seed = config.seed;
  KernelSpec spec;
  double cumulative = 0.0;

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const auto started = Clock::now();
    IterationRecord it;
    try {
      AcquisitionContext ctx;
      std::optional<GpPosterior> posterior;
      std::optional<InputOnlySurrogate> adapter;
      if (needs_model) {
        if (refit_due(t)) {
          const auto grid = default_kernel_grid(config.kernel, model_widths, config.gp_noise_variance,
                                                target_scale(model_data.targets()));
          spec = fit_hyperparams(model_data, grid, gp_options);
        }
        posterior.emplace(GpPosterior::fit(model_data, spec, gp_options));
        if (input_only) {
          adapter.emplace(*posterior);
          ctx.surrogate = &*adapter;
        } else {
          ctx.surrogate = &*posterior;
        }
      }
      it.eps = epsilon_at(schedule, t);
      ctx.eps = it.eps;
      ctx.sqrt_beta = config.exploration.sqrt_beta(t);
      if (config.context_grid) {
        ctx.contexts = ContextSet::uniform(linspace(ci.lo, ci.hi, config.contexts));
      } else {
        std::vector<double> cs(config.contexts);
        for (auto& c : cs) c = uniform(ci.lo, ci.hi);
        ctx.contexts = ContextSet::uniform(std::move(cs));
      }
      const std::uint64_t acq_seed = rng();
      const auto acq_started = Clock::now();
      it.x = maximize_acq(config.acquisition, ctx, box, config.maximizer, acq_seed);
      it.acq_ms = elapsed_ms(acq_started);
    } catch (const NumericalError& e) {
      throw NumericalError("iteration " + std::to_string(t) + ": " + e.what());
    }
    it.c = uniform(ci.lo, ci.hi);
    it.y = fn.observe(it.x, it.c, rng);
    append(it.x, it.c, it.y);

    auto step = oracle.step(it.eps, it.x);
    it.regret = step.regret;
    it.x_star = std::move(step.x_star);
    cumulative += it.regret;
    it.cumulative_regret = cumulative;
    if (config.timing) it.wall_ms = elapsed_ms(started);
    record.iterations.push_back(std::move(it));
  }
  record.dataset_size = data.size();
  return record;
}

std::uint64_t suite_seed(std::uint64_t base_seed, std::size_t config_index, std::size_t repeat) {
  return base_seed + 1000u * static_cast<std::uint64_t>(config_index) + static_cast<std::uint64_t>(repeat);
}

std::vector<SuiteEntry> run_suite(const std::vector<ExperimentConfig>& configs, std::size_t repeats,
                                  std::size_t jobs) {
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  for (const auto& c : configs) c.validate();

  std::vector<SuiteEntry> entries;
  for (std::size_t ci = 0; ci < configs.size(); ++ci) {
    for (std::size_t r = 0; r < repeats; ++r) {
      entries.push_back({ci, r, suite_seed(configs[ci].seed, ci, r), std::nullopt, {}});
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      auto& entry = entries[i];
      ExperimentConfig cfg = configs[entry.config_index];
      cfg.seed = entry.seed;
      try {
        entry.record = run_drbo(cfg);
      } catch (const std::exception& e) {
        entry.error = e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(entries.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return entries;
}

}  // namespace drbo
