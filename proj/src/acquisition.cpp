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

#include "drbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "drbo/errors.hpp"

namespace drbo {
namespace {

// Rows per predict_batch call; bounds the t x rows cross-covariance buffer.
constexpr std::size_t kMaxBatchRows = 4096;
constexpr int kHalvingsPerPass = 3;
constexpr int kMaxMovesPerStep = 64;

std::vector<double> draw_uniform(const InputBox& box, std::mt19937_64& rng) {
  std::vector<double> x(box.dim());
  for (std::size_t d = 0; d < box.dim(); ++d) {
    x[d] = std::uniform_real_distribution<double>(box.lo[d], box.hi[d])(rng);
  }
  return x;
}

}  // namespace

ExplorationSchedule ExplorationSchedule::constant(double sqrt_beta) {
  if (!(sqrt_beta >= 0.0)) throw ConfigError("sqrt_beta must be >= 0");
  ExplorationSchedule s;
  s.kind_ = Kind::Constant;
  s.value_ = sqrt_beta;
  return s;
}

ExplorationSchedule ExplorationSchedule::log_growth(double scale) {
  if (!(scale >= 0.0)) throw ConfigError("exploration scale must be >= 0");
  ExplorationSchedule s;
  s.kind_ = Kind::LogGrowth;
  s.value_ = scale;
  return s;
}

double ExplorationSchedule::sqrt_beta(std::size_t t) const {
  if (kind_ == Kind::Constant) return value_;
  const double td = static_cast<double>(std::max<std::size_t>(t, 1));
  return value_ * std::sqrt(2.0 * std::log(td * td * std::numbers::pi * std::numbers::pi / 6.0));
}

AcquisitionKind AcquisitionKind::from_string(std::string_view name) {
  AcquisitionKind k;
  if (name == "dro_chi2") {
    k.tag = AcquisitionTag::DroChi2;
  } else if (name == "dro_tv") {
    k.tag = AcquisitionTag::DroTv;
  } else if (name == "dro_kl") {
    k.tag = AcquisitionTag::DroKl;
  } else if (name == "ucb") {
    k.tag = AcquisitionTag::Ucb;
  } else if (name == "stableopt") {
    k.tag = AcquisitionTag::StableOpt;
  } else if (name == "random") {
    k.tag = AcquisitionTag::Random;
  } else {
    throw ConfigError("unknown acquisition '" + std::string(name) +
                      "' (valid: dro_chi2, dro_tv, dro_kl, ucb, stableopt, random)");
  }
  return k;
}

std::string AcquisitionKind::name() const {
  switch (tag) {
    case AcquisitionTag::DroChi2:
      return "dro_chi2";
    case AcquisitionTag::DroTv:
      return "dro_tv";
    case AcquisitionTag::DroKl:
      return "dro_kl";
    case AcquisitionTag::Ucb:
      return "ucb";
    case AcquisitionTag::StableOpt:
      return "stableopt";
    case AcquisitionTag::Random:
      return "random";
  }
  return "?";
}

bool AcquisitionKind::is_robust() const { return divergence().has_value(); }

std::optional<Divergence> AcquisitionKind::divergence() const {
  switch (tag) {
    case AcquisitionTag::DroChi2:
      return Divergence::Chi2;
    case AcquisitionTag::DroTv:
      return Divergence::TotalVariation;
    case AcquisitionTag::DroKl:
      return Divergence::KL;
    default:
      return std::nullopt;
  }
}

void InputBox::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError("input box is empty or malformed");
  for (std::size_t d = 0; d < lo.size(); ++d) {
    if (!(lo[d] < hi[d])) throw ConfigError("input box has an empty side");
  }
}

double acquisition_score(const AcquisitionKind& kind, std::span<const double> mean, std::span<const double> stddev,
                         std::span<const double> weights, double eps, double sqrt_beta,
                         std::span<const double> kl_lambda_grid) {
  const std::size_t n = mean.size();
  std::vector<double> ucb(n);
  for (std::size_t j = 0; j < n; ++j) {
    ucb[j] = mean[j] + sqrt_beta * stddev[j];
    if (!std::isfinite(ucb[j])) throw NumericalError("acquisition: non-finite posterior output");
  }
  switch (kind.tag) {
    case AcquisitionTag::Ucb:
      return weighted_mean(ucb, weights);
    case AcquisitionTag::DroChi2:
      return weighted_mean(ucb, weights) - std::sqrt(eps * weighted_variance(mean, weights));
    case AcquisitionTag::DroTv: {
      const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
      return weighted_mean(ucb, weights) - 0.5 * eps * (*hi - *lo);
    }
    case AcquisitionTag::DroKl: {
      if (kind.kl_lambda) {
        const double fixed[] = {*kind.kl_lambda};
        return robust_value_kl(ucb, weights, eps, fixed);
      }
      return robust_value_kl(ucb, weights, eps, kl_lambda_grid);
    }
    case AcquisitionTag::StableOpt:
      return *std::min_element(ucb.begin(), ucb.end());
    case AcquisitionTag::Random:
      return 0.0;
  }
  return 0.0;
}

std::vector<double> acq_values(const AcquisitionKind& kind, const AcquisitionContext& ctx,
                               const std::vector<std::vector<double>>& xs) {
  std::vector<double> out(xs.size(), 0.0);
  if (kind.tag == AcquisitionTag::Random || xs.empty()) return out;
  if (ctx.surrogate == nullptr) throw ConfigError("acquisition: no surrogate");
  ctx.contexts.validate();
  if (kind.kl_lambda && !(*kind.kl_lambda > 0.0)) throw ConfigError("acquisition: fixed KL lambda must be > 0");

  const std::size_t nc = ctx.contexts.size();
  const std::size_t dx = xs.front().size();
  if (ctx.surrogate->joint_dim() != dx + 1) throw ConfigError("acquisition: input dimension mismatch");
  const std::size_t per_batch = std::max<std::size_t>(1, kMaxBatchRows / nc);

  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  std::vector<double> mu(nc);
  std::vector<double> sd(nc);
  for (std::size_t start = 0; start < xs.size(); start += per_batch) {
    const std::size_t count = std::min(per_batch, xs.size() - start);
    Eigen::MatrixXd queries(static_cast<Eigen::Index>(count * nc), static_cast<Eigen::Index>(dx + 1));
    for (std::size_t i = 0; i < count; ++i) {
      const auto& x = xs[start + i];
      if (x.size() != dx) throw ConfigError("acquisition: inputs differ in dimension");
      for (std::size_t j = 0; j < nc; ++j) {
        const auto row = static_cast<Eigen::Index>(i * nc + j);
        for (std::size_t d = 0; d < dx; ++d) queries(row, static_cast<Eigen::Index>(d)) = x[d];
        queries(row, static_cast<Eigen::Index>(dx)) = ctx.contexts.supports[j];
      }
    }
    ctx.surrogate->predict_batch(queries, mean, var);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < nc; ++j) {
        const auto row = static_cast<Eigen::Index>(i * nc + j);
        mu[j] = mean(row);
        sd[j] = std::sqrt(std::max(var(row), 0.0));
      }
      out[start + i] =
          acquisition_score(kind, mu, sd, ctx.contexts.weights, ctx.eps, ctx.sqrt_beta, ctx.kl_lambda_grid);
    }
  }
  return out;
}

double acq_value(const AcquisitionKind& kind, const AcquisitionContext& ctx, std::span<const double> x) {
  return acq_values(kind, ctx, {std::vector<double>(x.begin(), x.end())}).front();
}

std::vector<double> maximize_acq(const AcquisitionKind& kind, const AcquisitionContext& ctx, const InputBox& box,
                                 const MaximizerOptions& options, std::uint64_t seed) {
  box.validate();
  if (options.budget == 0) throw ConfigError("maximize_acq: budget must be >= 1");
  std::mt19937_64 rng(seed);
  if (kind.tag == AcquisitionTag::Random) return draw_uniform(box, rng);

  std::vector<std::vector<double>> candidates;
  candidates.reserve(options.budget);
  for (std::size_t i = 0; i < options.budget; ++i) candidates.push_back(draw_uniform(box, rng));
  const auto values = acq_values(kind, ctx, candidates);
  std::size_t best_index = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best_index]) best_index = i;
  }
  std::vector<double> x = candidates[best_index];
  double best = values[best_index];
  if (!options.refine) return x;

  for (int pass = 0; pass < options.passes; ++pass) {
    for (std::size_t d = 0; d < box.dim(); ++d) {
      double step = 0.1 * (box.hi[d] - box.lo[d]) / static_cast<double>(1 << pass);
      for (int h = 0; h <= kHalvingsPerPass; ++h, step *= 0.5) {
        for (int move = 0; move < kMaxMovesPerStep; ++move) {
          std::vector<std::vector<double>> trial(2, x);
          trial[0][d] = std::min(box.hi[d], x[d] + step);
          trial[1][d] = std::max(box.lo[d], x[d] - step);
          const auto tv = acq_values(kind, ctx, trial);
          const std::size_t pick = tv[1] > tv[0] ? 1 : 0;
          if (!(tv[pick] > best) || trial[pick][d] == x[d]) break;
          best = tv[pick];
          x = std::move(trial[pick]);
        }
      }
    }
  }
  return x;
}

}  // namespace drbo
