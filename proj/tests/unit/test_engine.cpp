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
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "drbo/engine.hpp"
#include "drbo/errors.hpp"

namespace drbo {
namespace {

ExperimentConfig small_config(const std::string& acquisition, std::size_t iterations = 8) {
  ExperimentConfig c;
  c.benchmark = "gap";
  c.acquisition = AcquisitionKind::from_string(acquisition);
  c.iterations = iterations;
  c.seed = 17;
  c.noise_sigma = 0.05;
  c.x_grid = 101;
  c.c_grid = 51;
  c.maximizer.budget = 64;
  return c;
}

void expect_same_record(const RegretRecord& a, const RegretRecord& b) {
  ASSERT_EQ(a.iterations.size(), b.iterations.size());
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.dataset_size, b.dataset_size);
  for (std::size_t t = 0; t < a.iterations.size(); ++t) {
    const auto& x = a.iterations[t];
    const auto& y = b.iterations[t];
    ASSERT_EQ(x.x, y.x) << "t=" << t;
    ASSERT_EQ(x.c, y.c);
    ASSERT_EQ(x.y, y.y);
    ASSERT_EQ(x.eps, y.eps);
    ASSERT_EQ(x.regret, y.regret);
    ASSERT_EQ(x.cumulative_regret, y.cumulative_regret);
    ASSERT_EQ(x.x_star, y.x_star);
  }
}

double constant_raw(std::span<const double>) { return 4.2; }

TEST(Linspace, Endpoints) {
  const auto v = linspace(-1.0, 3.0, 5);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), -1.0);
  EXPECT_EQ(v.back(), 3.0);
  EXPECT_DOUBLE_EQ(v[2], 1.0);
  EXPECT_EQ(linspace(0.0, 1.0, 1), std::vector<double>{0.5});
  EXPECT_TRUE(linspace(0.0, 1.0, 0).empty());
}

TEST(Config, Validation) {
  auto c = small_config("dro_tv");
  EXPECT_NO_THROW(c.validate());
  c.iterations = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config("dro_tv");
  c.contexts = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config("dro_tv");
  c.eps = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config("dro_tv");
  c.benchmark = "nope";
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, ResolvedDefaults) {
  auto c = small_config("ucb");
  EXPECT_EQ(c.resolved_initial_points(), 6u);
  c.benchmark = "hartmann3";
  EXPECT_EQ(c.resolved_initial_points(), 9u);
  c.initial_points = 2;
  EXPECT_EQ(c.resolved_initial_points(), 2u);
  EXPECT_EQ(c.resolved_label(), "ucb");
  c.label = "baseline";
  EXPECT_EQ(c.resolved_label(), "baseline");
  c.divergence = Divergence::KL;
  EXPECT_EQ(c.regret_divergence(), Divergence::KL);
  c.acquisition = AcquisitionKind::from_string("dro_chi2");
  EXPECT_EQ(c.regret_divergence(), Divergence::Chi2);
}

TEST(RegretStep, OptimalChoiceHasZeroRegret) {
  const auto fn = make_benchmark("gap");
  auto oracle = RobustRegretOracle::on_grid(fn, Divergence::Chi2, 101, 51);
  const auto first = oracle.step(0.3, std::vector<double>{0.5});
  const auto again = oracle.step(0.3, first.x_star);
  EXPECT_EQ(again.regret, 0.0);
  EXPECT_GT(first.regret, 0.0);
}

TEST(RegretStep, ZeroRadiusMatchesMeanOverGrid) {
  const auto fn = make_benchmark("branin");
  const auto xs = linspace(-5.0, 10.0, 61);
  const auto cs = linspace(0.0, 15.0, 31);
  std::vector<std::vector<double>> grid;
  for (double x : xs) grid.push_back({x});
  double best = -1e300, x_best = 0.0;
  for (double x : xs) {
    double m = 0.0;
    for (double c : cs) m += fn.evaluate(std::vector<double>{x}, c) / 31.0;
    if (m > best) {
      best = m;
      x_best = x;
    }
  }
  const std::vector<double> x_t = {1.0};
  double m_t = 0.0;
  for (double c : cs) m_t += fn.evaluate(x_t, c) / 31.0;
  for (auto kind : {Divergence::Chi2, Divergence::TotalVariation}) {
    const auto step = robust_regret_step(fn, kind, 0.0, x_t, grid, cs);
    EXPECT_EQ(step.x_star[0], x_best);
    EXPECT_NEAR(step.regret, best - m_t, 1e-9);
  }
}

TEST(RegretStep, ConstantFunctionHasZeroRegret) {
  const BenchmarkFunction flat("flat", {{0.0, 1.0}}, {0.0, 1.0}, constant_raw, false);
  auto oracle = RobustRegretOracle::on_grid(flat, Divergence::KL, 21, 11);
  for (double eps : {0.0, 0.1, 2.0}) {
    for (double x : {0.0, 0.37, 1.0}) EXPECT_NEAR(oracle.step(eps, std::vector<double>{x}).regret, 0.0, 1e-12);
  }
}

TEST(RegretStep, NonNegativeOnGridPoints) {
  const auto fn = make_benchmark("six_hump_camel");
  auto oracle = RobustRegretOracle::on_grid(fn, Divergence::TotalVariation, 41, 21);
  EXPECT_EQ(oracle.grid_size(), 41u);
  for (int i = 0; i < 41; ++i) {
    const double x = -3.0 + 6.0 * i / 40.0;
    EXPECT_GE(oracle.step(0.4, std::vector<double>{x}).regret, 0.0);
  }
}

TEST(RunDrbo, SingleRandomIterationIsExact) {
  auto c = small_config("random", 1);
  c.noise_sigma = 0.0;
  const auto fn = make_benchmark("gap");
  const auto r = run_drbo(c);
  ASSERT_EQ(r.iterations.size(), 1u);
  const auto& it = r.iterations[0];
  ASSERT_EQ(it.x.size(), 1u);
  EXPECT_GE(it.x[0], 0.0);
  EXPECT_LE(it.x[0], 1.0);
  EXPECT_EQ(it.y, fn.evaluate(it.x, it.c));
  EXPECT_EQ(it.cumulative_regret, it.regret);
}

TEST(RunDrbo, DeterministicForSeed) {
  for (const char* acq : {"dro_chi2", "dro_kl", "stableopt", "random"}) {
    const auto c = small_config(acq);
    expect_same_record(run_drbo(c), run_drbo(c));
  }
}

TEST(RunDrbo, DifferentSeedsDiffer) {
  auto a = small_config("dro_tv");
  auto b = a;
  b.seed = a.seed + 1;
  EXPECT_NE(run_drbo(a).iterations.front().x, run_drbo(b).iterations.front().x);
}

TEST(RunDrbo, DatasetGrowsByIterations) {
  auto c = small_config("dro_tv", 5);
  EXPECT_EQ(run_drbo(c).dataset_size, 6u + 5u);
  c.initial_points = 3;
  EXPECT_EQ(run_drbo(c).dataset_size, 8u);
}

TEST(RunDrbo, CumulativeRegretIsRunningSum) {
  const auto r = run_drbo(small_config("dro_chi2", 12));
  double sum = 0.0;
  for (const auto& it : r.iterations) {
    EXPECT_GE(it.regret, -1e-6);
    sum += it.regret;
    EXPECT_NEAR(it.cumulative_regret, sum, 1e-12);
  }
  EXPECT_EQ(r.final_regret(), r.iterations.back().cumulative_regret);
}

TEST(RunDrbo, AdaptiveScheduleRecordsRadius) {
  auto c = small_config("dro_kl", 6);
  c.schedule = ScheduleKind::Adaptive;
  const auto r = run_drbo(c);
  const auto schedule = RadiusSchedule::adaptive(Divergence::KL);
  for (std::size_t t = 0; t < r.iterations.size(); ++t) {
    EXPECT_EQ(r.iterations[t].eps, epsilon_at(schedule, t + 1));
  }
}

TEST(RunDrbo, ZeroRadiusRobustRunsMatchUcb) {
  auto base = small_config("ucb", 20);
  base.eps = 0.0;
  const auto ucb = run_drbo(base);
  for (const char* acq : {"dro_chi2", "dro_tv"}) {
    auto c = base;
    c.acquisition = AcquisitionKind::from_string(acq);
    const auto r = run_drbo(c);
    for (std::size_t t = 0; t < r.iterations.size(); ++t) {
      ASSERT_EQ(r.iterations[t].x, ucb.iterations[t].x) << acq << " t=" << t;
    }
  }
}

TEST(RunDrbo, TimingOnlyWhenRequested) {
  auto c = small_config("dro_tv", 3);
  for (const auto& it : run_drbo(c).iterations) {
    EXPECT_EQ(it.wall_ms, 0.0);
    EXPECT_GE(it.acq_ms, 0.0);
  }
  c.timing = true;
  for (const auto& it : run_drbo(c).iterations) EXPECT_GT(it.wall_ms, 0.0);
}

TEST(RunDrbo, ContextGridAndInputOnlyBaseline) {
  auto c = small_config("ucb", 6);
  c.context_grid = true;
  expect_same_record(run_drbo(c), run_drbo(c));
  c.ucb_input_only = true;
  const auto r = run_drbo(c);
  EXPECT_EQ(r.iterations.size(), 6u);
  EXPECT_EQ(r.dataset_size, 12u);
}

TEST(RunDrbo, RobustBeatsRandomOnGap) {
  std::vector<double> robust, random;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ExperimentConfig c;
    c.benchmark = "gap";
    c.iterations = 60;
    c.noise_sigma = 0.05;
    c.seed = 4000 + seed;
    c.acquisition = AcquisitionKind::from_string("dro_tv");
    robust.push_back(run_drbo(c).final_regret());
    c.acquisition = AcquisitionKind::from_string("random");
    random.push_back(run_drbo(c).final_regret());
  }
  std::sort(robust.begin(), robust.end());
  std::sort(random.begin(), random.end());
  EXPECT_LT(0.5 * (robust[4] + robust[5]), 0.5 * (random[4] + random[5]));
}

TEST(Suite, SeedDerivation) {
  EXPECT_EQ(suite_seed(7, 0, 0), 7u);
  EXPECT_EQ(suite_seed(7, 2, 3), 2010u);
}

TEST(Suite, SingleEntryMatchesRunDrbo) {
  const auto c = small_config("dro_tv");
  const auto entries = run_suite({c}, 1, 1);
  ASSERT_EQ(entries.size(), 1u);
  ASSERT_TRUE(entries[0].record.has_value());
  EXPECT_EQ(entries[0].seed, c.seed);
  expect_same_record(*entries[0].record, run_drbo(c));
}

TEST(Suite, ParallelismDoesNotChangeResults) {
  const std::vector<ExperimentConfig> configs = {small_config("dro_chi2", 4), small_config("random", 4)};
  const auto serial = run_suite(configs, 3, 1);
  const auto parallel = run_suite(configs, 3, 8);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].config_index, parallel[i].config_index);
    EXPECT_EQ(serial[i].repeat, parallel[i].repeat);
    EXPECT_EQ(serial[i].seed, parallel[i].seed);
    ASSERT_TRUE(serial[i].record && parallel[i].record);
    expect_same_record(*serial[i].record, *parallel[i].record);
  }
}

TEST(Suite, DistinctSeedsAcrossConfigsAndRepeats) {
  std::vector<ExperimentConfig> configs;
  for (const char* acq : {"random", "random", "random"}) configs.push_back(small_config(acq, 1));
  const auto entries = run_suite(configs, 10, 2);
  ASSERT_EQ(entries.size(), 30u);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    EXPECT_EQ(entries[i].config_index, i / 10);
    EXPECT_EQ(entries[i].repeat, i % 10);
    seeds.insert(entries[i].seed);
  }
  EXPECT_EQ(seeds.size(), 30u);
}

TEST(Suite, Validation) {
  EXPECT_THROW(run_suite({small_config("ucb")}, 0, 1), ConfigError);
  auto bad = small_config("ucb");
  bad.iterations = 0;
  EXPECT_THROW(run_suite({bad}, 1, 1), ConfigError);
}

}  // namespace
}  // namespace drbo
