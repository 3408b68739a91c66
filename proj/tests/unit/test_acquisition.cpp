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
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "drbo/acquisition.hpp"
#include "drbo/errors.hpp"
#include "oracles.hpp"

namespace drbo {
namespace {

using testing::StubSurrogate;
using testing::uniform_vector;

const AcquisitionKind kChi2 = AcquisitionKind::from_string("dro_chi2");
const AcquisitionKind kTv = AcquisitionKind::from_string("dro_tv");
const AcquisitionKind kKl = AcquisitionKind::from_string("dro_kl");
const AcquisitionKind kUcb = AcquisitionKind::from_string("ucb");
const AcquisitionKind kStable = AcquisitionKind::from_string("stableopt");
const AcquisitionKind kRandom = AcquisitionKind::from_string("random");

double score(const AcquisitionKind& kind, const std::vector<double>& mu, const std::vector<double>& sd,
             const std::vector<double>& w, double eps, double sqrt_beta = 2.0) {
  return acquisition_score(kind, mu, sd, w, eps, sqrt_beta, default_kl_lambda_grid());
}

std::vector<double> uniform_weights(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

TEST(Exploration, ConstantAndLogGrowth) {
  const auto c = ExplorationSchedule::constant(1.5);
  EXPECT_EQ(c.sqrt_beta(1), 1.5);
  EXPECT_EQ(c.sqrt_beta(40), 1.5);
  const auto g = ExplorationSchedule::log_growth(0.5);
  for (std::size_t t : {1u, 7u, 100u}) {
    const double td = static_cast<double>(t);
    EXPECT_NEAR(g.sqrt_beta(t), 0.5 * std::sqrt(2.0 * std::log(td * td * std::numbers::pi * std::numbers::pi / 6.0)),
                1e-12);
  }
  EXPECT_THROW(ExplorationSchedule::constant(-1.0), ConfigError);
  EXPECT_THROW(ExplorationSchedule::log_growth(-1.0), ConfigError);
}

TEST(Kinds, Names) {
  for (const char* name : {"dro_chi2", "dro_tv", "dro_kl", "ucb", "stableopt", "random"}) {
    EXPECT_EQ(AcquisitionKind::from_string(name).name(), name);
  }
  EXPECT_THROW(AcquisitionKind::from_string("ei"), ConfigError);
  EXPECT_TRUE(kChi2.is_robust());
  EXPECT_FALSE(kUcb.is_robust());
  EXPECT_EQ(kKl.divergence(), Divergence::KL);
  EXPECT_FALSE(kStable.divergence().has_value());
}

TEST(Score, ZeroRadiusCollapsesToUcb) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mu = uniform_vector(rng, 7, -2.0, 2.0);
    const auto sd = uniform_vector(rng, 7, 0.0, 1.0);
    const auto w = uniform_weights(7);
    const double u = score(kUcb, mu, sd, w, 0.0);
    ASSERT_EQ(score(kChi2, mu, sd, w, 0.0), u);
    ASSERT_EQ(score(kTv, mu, sd, w, 0.0), u);
  }
}

TEST(Score, UcbIsContextAverage) {
  const std::vector<double> mu = {0.1, 0.5}, sd = {0.2, 0.4};
  EXPECT_NEAR(score(kUcb, mu, sd, uniform_weights(2), 0.3, 1.5), 0.5 * (0.1 + 0.3) + 0.5 * (0.5 + 0.6), 1e-15);
  EXPECT_NEAR(score(kStable, mu, sd, uniform_weights(2), 0.3, 1.5), 0.4, 1e-15);
}

TEST(Score, ConstantMeanHasNoTvOrChi2Penalty) {
  const std::vector<double> mu(5, 0.7);
  const std::vector<double> sd = {0.1, 0.2, 0.3, 0.4, 0.5};
  const auto w = uniform_weights(5);
  EXPECT_DOUBLE_EQ(score(kTv, mu, sd, w, 0.9), score(kUcb, mu, sd, w, 0.9));
  EXPECT_DOUBLE_EQ(score(kChi2, mu, sd, w, 0.9), score(kUcb, mu, sd, w, 0.9));
}

TEST(Score, RobustNeverExceedsUcbAndTvPenaltyIsHalfSpread) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const auto mu = uniform_vector(rng, n, -3.0, 3.0);
    const auto sd = uniform_vector(rng, n, 0.0, 1.0);
    const auto w = uniform_weights(n);
    const double eps = uniform_vector(rng, 1, 0.01, 1.0)[0];
    const double u = score(kUcb, mu, sd, w, eps);
    ASSERT_LT(score(kChi2, mu, sd, w, eps), u);
    ASSERT_LT(score(kTv, mu, sd, w, eps), u);
    ASSERT_LE(score(kKl, mu, sd, w, eps), u + 1e-12);
    const auto [lo, hi] = std::minmax_element(mu.begin(), mu.end());
    ASSERT_NEAR(u - score(kTv, mu, sd, w, eps), 0.5 * eps * (*hi - *lo), 1e-12);
  }
}

TEST(Score, ShiftByConstantShiftsEveryKind) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = uniform_vector(rng, 6, -1.0, 1.0);
    const auto sd = uniform_vector(rng, 6, 0.0, 0.5);
    const auto w = uniform_weights(6);
    auto shifted = mu;
    for (auto& m : shifted) m += 3.25;
    for (const auto& kind : {kChi2, kTv, kKl, kUcb, kStable}) {
      ASSERT_NEAR(score(kind, shifted, sd, w, 0.2), score(kind, mu, sd, w, 0.2) + 3.25, 1e-9) << kind.name();
    }
  }
}

TEST(Score, FixedKlLambda) {
  AcquisitionKind fixed = kKl;
  fixed.kl_lambda = 5.0;
  const std::vector<double> mu = {0.0, 1.0}, sd = {0.0, 0.0};
  const double expected = -5.0 * 0.1 - 5.0 * std::log(0.5 * (1.0 + std::exp(-1.0 / 5.0)));
  EXPECT_NEAR(score(fixed, mu, sd, uniform_weights(2), 0.1), expected, 1e-12);
}

TEST(Score, NonFiniteIsNumericalError) {
  const std::vector<double> mu = {0.0, std::nan("")}, sd = {0.1, 0.1};
  EXPECT_THROW(score(kUcb, mu, sd, uniform_weights(2), 0.1), NumericalError);
}

TEST(AcqValue, Chi2MatchesHandComposition) {
  Dataset data(2);
  data.add(JointInput{{0.1}, 0.2}, 0.5);
  data.add(JointInput{{0.6}, 0.9}, -0.3);
  data.add(JointInput{{0.9}, 0.4}, 1.1);
  KernelSpec spec;
  spec.lengthscales = {1.0, 1.0};
  spec.signal_variance = 1.0;
  spec.noise_variance = 0.01;
  const auto gp = GpPosterior::fit(data, spec);

  AcquisitionContext ctx;
  ctx.surrogate = &gp;
  ctx.contexts = ContextSet::uniform({0.25, 0.75});
  ctx.eps = 0.3;
  ctx.sqrt_beta = 1.7;
  const std::vector<double> x = {0.45};

  const auto p0 = gp.predict(JointInput{x, 0.25});
  const auto p1 = gp.predict(JointInput{x, 0.75});
  const double ucb = 0.5 * (p0.mean + 1.7 * std::sqrt(p0.variance)) + 0.5 * (p1.mean + 1.7 * std::sqrt(p1.variance));
  const double m = 0.5 * (p0.mean + p1.mean);
  const double var = 0.5 * (p0.mean - m) * (p0.mean - m) + 0.5 * (p1.mean - m) * (p1.mean - m);
  EXPECT_NEAR(acq_value(kChi2, ctx, x), ucb - std::sqrt(0.3 * var), 1e-10);
}

TEST(AcqValue, BatchedEqualsSingle) {
  const StubSurrogate stub(2, [](const Eigen::RowVectorXd& z) { return std::sin(3.0 * z(0)) * z(1); },
                           [](const Eigen::RowVectorXd& z) { return 0.1 + 0.05 * z(0); });
  AcquisitionContext ctx;
  ctx.surrogate = &stub;
  ctx.contexts = ContextSet::uniform({0.0, 0.3, 0.6, 1.0});
  ctx.eps = 0.2;
  std::mt19937_64 rng(73);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 20; ++i) xs.push_back(uniform_vector(rng, 1, 0.0, 1.0));
  const auto batch = acq_values(kTv, ctx, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(batch[i], acq_value(kTv, ctx, xs[i]));
}

TEST(AcqValue, Validation) {
  AcquisitionContext ctx;
  ctx.contexts = ContextSet::uniform({0.0, 1.0});
  const std::vector<double> x = {0.5};
  EXPECT_THROW(acq_value(kUcb, ctx, x), ConfigError);
  const StubSurrogate stub(3, [](const Eigen::RowVectorXd&) { return 0.0; },
                           [](const Eigen::RowVectorXd&) { return 0.0; });
  ctx.surrogate = &stub;
  EXPECT_THROW(acq_value(kUcb, ctx, x), ConfigError);
}

// Concave quadratic in x, linear in c; analytic argmax of every kind is known.
StubSurrogate quadratic_stub(double x0, double x1) {
  return StubSurrogate(
      3,
      [x0, x1](const Eigen::RowVectorXd& z) {
        return -(z(0) - x0) * (z(0) - x0) - 2.0 * (z(1) - x1) * (z(1) - x1) + 0.1 * z(2);
      },
      [](const Eigen::RowVectorXd&) { return 0.05; });
}

TEST(Maximizer, FindsPlantedQuadraticOptimum) {
  const auto stub = quadratic_stub(0.37, -1.2);
  AcquisitionContext ctx;
  ctx.surrogate = &stub;
  ctx.contexts = ContextSet::uniform({0.0, 0.5, 1.0});
  ctx.eps = 0.5;
  const InputBox box{{-1.0, -3.0}, {2.0, 1.0}};
  for (const auto& kind : {kUcb, kChi2, kTv, kKl, kStable}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto x = maximize_acq(kind, ctx, box, {}, seed);
      EXPECT_NEAR(x[0], 0.37, 1e-2) << kind.name();
      EXPECT_NEAR(x[1], -1.2, 1e-2) << kind.name();
    }
  }
}

TEST(Maximizer, OptimumOnBoundary) {
  const auto stub = quadratic_stub(5.0, 0.0);
  AcquisitionContext ctx;
  ctx.surrogate = &stub;
  ctx.contexts = ContextSet::uniform({0.0, 1.0});
  const InputBox box{{0.0, -1.0}, {1.0, 1.0}};
  const auto x = maximize_acq(kUcb, ctx, box, {}, 4);
  EXPECT_EQ(x[0], 1.0);
  EXPECT_NEAR(x[1], 0.0, 1e-2);
}

TEST(Maximizer, SingleCandidateWithoutRefinement) {
  const auto stub = quadratic_stub(0.5, 0.5);
  AcquisitionContext ctx;
  ctx.surrogate = &stub;
  ctx.contexts = ContextSet::uniform({0.0, 1.0});
  const InputBox box{{0.0, 0.0}, {1.0, 1.0}};
  MaximizerOptions opts;
  opts.budget = 1;
  opts.refine = false;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(maximize_acq(kUcb, ctx, box, opts, seed), maximize_acq(kRandom, ctx, box, opts, seed));
  }
}

TEST(Maximizer, RandomIgnoresPosterior) {
  const auto a = quadratic_stub(0.1, 0.1);
  const auto b = quadratic_stub(0.9, 0.9);
  AcquisitionContext ca, cb, none;
  ca.surrogate = &a;
  cb.surrogate = &b;
  const InputBox box{{-2.0, 3.0}, {2.0, 4.0}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto xa = maximize_acq(kRandom, ca, box, {}, seed);
    EXPECT_EQ(xa, maximize_acq(kRandom, cb, box, {}, seed));
    EXPECT_EQ(xa, maximize_acq(kRandom, none, box, {}, seed));
    EXPECT_GE(xa[0], -2.0);
    EXPECT_LE(xa[0], 2.0);
    EXPECT_GE(xa[1], 3.0);
    EXPECT_LE(xa[1], 4.0);
  }
}

TEST(Maximizer, Deterministic) {
  const StubSurrogate stub(2, [](const Eigen::RowVectorXd& z) { return std::cos(7.0 * z(0)) + z(1) * z(0); },
                           [](const Eigen::RowVectorXd& z) { return 0.2 * z(0); });
  AcquisitionContext ctx;
  ctx.surrogate = &stub;
  ctx.contexts = ContextSet::uniform({0.1, 0.4, 0.8});
  ctx.eps = 0.3;
  const InputBox box{{0.0}, {2.0}};
  EXPECT_EQ(maximize_acq(kChi2, ctx, box, {}, 99), maximize_acq(kChi2, ctx, box, {}, 99));
}

TEST(Maximizer, Validation) {
  AcquisitionContext ctx;
  EXPECT_THROW(maximize_acq(kRandom, ctx, InputBox{{}, {}}, {}, 0), ConfigError);
  EXPECT_THROW(maximize_acq(kRandom, ctx, InputBox{{1.0}, {1.0}}, {}, 0), ConfigError);
  MaximizerOptions zero;
  zero.budget = 0;
  EXPECT_THROW(maximize_acq(kRandom, ctx, InputBox{{0.0}, {1.0}}, zero, 0), ConfigError);
}

}  // namespace
}  // namespace drbo
