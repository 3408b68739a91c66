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
#include <random>
#include <span>
#include <string>
#include <vector>

#include "drbo/acquisition.hpp"

namespace drbo {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

// Objective f(x, c) whose last coordinate is the uncontrolled context.
class BenchmarkFunction {
 public:
  // Raw objective on the full coordinate vector [x..., c].
  using Raw = double (*)(std::span<const double>);

  BenchmarkFunction(std::string name, std::vector<Interval> input_box, Interval context_interval, Raw raw,
                    bool negate, double noise_sigma = 0.0);

  const std::string& name() const { return name_; }
  std::size_t input_dim() const { return input_box_.size(); }
  const std::vector<Interval>& input_box() const { return input_box_; }
  const Interval& context_interval() const { return context_; }
  bool negate() const { return negate_; }
  double noise_sigma() const { return noise_sigma_; }

  BenchmarkFunction with_negate(bool negate) const;
  BenchmarkFunction with_noise(double noise_sigma) const;

  InputBox box() const;
  // Widths of the joint [x, c] space, in coordinate order.
  std::vector<double> joint_widths() const;

  // Noise-free value, sign-flipped when negate is set. Throws DomainError off the domain.
  double evaluate(std::span<const double> x, double c) const;
  // evaluate + N(0, noise_sigma^2).
  double observe(std::span<const double> x, double c, std::mt19937_64& rng) const;

 private:
  std::string name_;
  std::vector<Interval> input_box_;
  Interval context_;
  Raw raw_;
  bool negate_;
  double noise_sigma_;
};

// Built-in names: branin, goldstein_price, six_hump_camel, hartmann3, gap.
const std::vector<std::string>& benchmark_names();

// Minimization benchmarks come negated so that larger is better; gap is
// already a maximization problem.
BenchmarkFunction make_benchmark(const std::string& name);

namespace raw {
double branin(std::span<const double> z);
double goldstein_price(std::span<const double> z);
double six_hump_camel(std::span<const double> z);
double hartmann3(std::span<const double> z);
// Two bumps in x: one modest and nearly context-insensitive, one taller on
// average but vanishing at c = 1. The average-case and worst-case maximizers
// sit on different bumps.
double gap(std::span<const double> z);
}  // namespace raw

}  // namespace drbo
