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


#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "drbo/benchmarks.hpp"
#include "drbo/errors.hpp"

namespace drbo {
namespace {

double raw_value(const std::string& name, std::vector<double> x, double c) {
  return make_benchmark(name).with_negate(false).evaluate(x, c);
}

TEST(Benchmarks, Registry) {
  const auto& names = benchmark_names();
  for (const char* expected : {"branin", "goldstein_price", "six_hump_camel", "hartmann3", "gap"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  }
  EXPECT_THROW(make_benchmark("rosenbrock"), ConfigError);
  try {
    make_benchmark("nope");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("six_hump_camel"), std::string::npos);
  }
}

TEST(Benchmarks, BraninMinimizer) {
  EXPECT_NEAR(raw_value("branin", {std::numbers::pi}, 2.275), 0.397887, 1e-6);
  EXPECT_NEAR(raw_value("branin", {-std::numbers::pi}, 12.275), 0.397887, 1e-6);
  // Stationary: central differences vanish at the minimizer.
  const double h = 1e-5;
  const double gx = (raw_value("branin", {std::numbers::pi + h}, 2.275) -
                     raw_value("branin", {std::numbers::pi - h}, 2.275)) / (2 * h);
  const double gc = (raw_value("branin", {std::numbers::pi}, 2.275 + h) -
                     raw_value("branin", {std::numbers::pi}, 2.275 - h)) / (2 * h);
  EXPECT_NEAR(gx, 0.0, 1e-5);
  EXPECT_NEAR(gc, 0.0, 1e-5);
}

TEST(Benchmarks, SixHumpCamelMinimizer) {
  EXPECT_NEAR(raw_value("six_hump_camel", {0.0898}, -0.7126), -1.0316, 1e-4);
  EXPECT_NEAR(raw_value("six_hump_camel", {-0.0898}, 0.7126), -1.0316, 1e-4);
}

TEST(Benchmarks, GoldsteinPriceMinimizer) { EXPECT_NEAR(raw_value("goldstein_price", {0.0}, -1.0), 3.0, 1e-12); }

TEST(Benchmarks, Hartmann3Minimizer) {
  EXPECT_NEAR(raw_value("hartmann3", {0.114614, 0.555649}, 0.852547), -3.86278, 1e-5);
}

TEST(Benchmarks, NegationFlipsSignExactly) {
  std::mt19937_64 rng(81);
  for (const auto& name : benchmark_names()) {
    const auto fn = make_benchmark(name);
    const auto flipped = fn.with_negate(!fn.negate());
    const auto box = fn.input_box();
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x;
      for (const auto& iv : box) x.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng));
      const double c = std::uniform_real_distribution<double>(fn.context_interval().lo, fn.context_interval().hi)(rng);
      ASSERT_EQ(fn.evaluate(x, c), -flipped.evaluate(x, c)) << name;
    }
  }
}

TEST(Benchmarks, FiniteOverDomainGrid) {
  for (const auto& name : benchmark_names()) {
    const auto fn = make_benchmark(name);
    const auto& box = fn.input_box();
    const auto& ci = fn.context_interval();
    for (int i = 0; i < 100; ++i) {
      for (int j = 0; j < 100; ++j) {
        std::vector<double> x;
        for (const auto& iv : box) x.push_back(iv.lo + iv.width() * i / 99.0);
        const double c = ci.lo + ci.width() * j / 99.0;
        ASSERT_TRUE(std::isfinite(fn.evaluate(x, c))) << name;
      }
    }
  }
}

TEST(Benchmarks, OutOfDomainIsDomainError) {
  const auto fn = make_benchmark("branin");
  EXPECT_THROW(fn.evaluate(std::vector<double>{11.0}, 1.0), DomainError);
  EXPECT_THROW(fn.evaluate(std::vector<double>{0.0}, -0.5), DomainError);
  EXPECT_THROW(fn.evaluate(std::vector<double>{0.0, 1.0}, 1.0), ConfigError);
  EXPECT_NO_THROW(fn.evaluate(std::vector<double>{10.0}, 15.0));
}

TEST(Benchmarks, GapStochasticAndRobustMaximizersDiffer) {
  const auto fn = make_benchmark("gap");
  double best_mean = -1e9, best_min = -1e9, x_mean = 0.0, x_min = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    double mean = 0.0, worst = 1e9;
    for (int j = 0; j <= 200; ++j) {
      const double v = fn.evaluate(std::vector<double>{x}, j / 200.0);
      mean += v / 201.0;
      worst = std::min(worst, v);
    }
    if (mean > best_mean) {
      best_mean = mean;
      x_mean = x;
    }
    if (worst > best_min) {
      best_min = worst;
      x_min = x;
    }
  }
  EXPECT_NEAR(x_mean, 0.8, 0.02);
  EXPECT_NEAR(x_min, 0.2, 0.02);
  EXPECT_GT(std::abs(x_mean - x_min), 0.5);
}

TEST(Benchmarks, DimensionsAndWidths) {
  EXPECT_EQ(make_benchmark("hartmann3").input_dim(), 2u);
  EXPECT_EQ(make_benchmark("gap").input_dim(), 1u);
  const auto w = make_benchmark("branin").joint_widths();
  ASSERT_EQ(w.size(), 2u);
  EXPECT_DOUBLE_EQ(w[0], 15.0);
  EXPECT_DOUBLE_EQ(w[1], 15.0);
}

TEST(Observe, NoiselessEqualsEvaluate) {
  const auto fn = make_benchmark("six_hump_camel");
  std::mt19937_64 rng(1);
  const std::vector<double> x = {0.3};
  EXPECT_EQ(fn.observe(x, 0.2, rng), fn.evaluate(x, 0.2));
}

TEST(Observe, NoiseMeanMatchesEvaluate) {
  const double sigma = 0.3;
  const auto fn = make_benchmark("gap").with_noise(sigma);
  std::mt19937_64 rng(2);
  const std::vector<double> x = {0.35};
  double sum = 0.0, sum2 = 0.0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const double v = fn.observe(x, 0.6, rng);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(mean, fn.evaluate(x, 0.6), 4.0 * sigma / 100.0);
  EXPECT_NEAR(std::sqrt(sum2 / kDraws - mean * mean), sigma, 0.02);
}

TEST(Observe, SameSeedSameObservation) {
  const auto fn = make_benchmark("branin").with_noise(1.0);
  std::mt19937_64 a(7), b(7);
  const std::vector<double> x = {1.0};
  EXPECT_EQ(fn.observe(x, 3.0, a), fn.observe(x, 3.0, b));
  EXPECT_THROW(make_benchmark("gap").with_noise(-1.0), ConfigError);
}

}  // namespace
}  // namespace drbo
