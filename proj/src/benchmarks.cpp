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

#include "drbo/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "drbo/errors.hpp"

namespace drbo {
namespace {

constexpr double kDomainSlack = 1e-12;

bool inside(const Interval& iv, double v) { return v >= iv.lo - kDomainSlack && v <= iv.hi + kDomainSlack; }

}  // namespace

namespace raw {

double branin(std::span<const double> z) {
  constexpr double pi = std::numbers::pi;
  const double b = 5.1 / (4.0 * pi * pi);
  const double c = 5.0 / pi;
  const double t = 1.0 / (8.0 * pi);
  const double x1 = z[0];
  const double x2 = z[1];
  const double u = x2 - b * x1 * x1 + c * x1 - 6.0;
  return u * u + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

double goldstein_price(std::span<const double> z) {
  const double x1 = z[0];
  const double x2 = z[1];
  const double s = x1 + x2 + 1.0;
  const double a = 1.0 + s * s * (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
  const double d = 2.0 * x1 - 3.0 * x2;
  const double b =
      30.0 + d * d * (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
  return a * b;
}

double six_hump_camel(std::span<const double> z) {
  const double x1 = z[0];
  const double x2 = z[1];
  const double x1s = x1 * x1;
  return (4.0 - 2.1 * x1s + x1s * x1s / 3.0) * x1s + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2;
}

double hartmann3(std::span<const double> z) {
  static constexpr double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  static constexpr double a[4][3] = {{3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
  static constexpr double p[4][3] = {{0.3689, 0.1170, 0.2673},
                                     {0.4699, 0.4387, 0.7470},
                                     {0.1091, 0.8732, 0.5547},
                                     {0.0381, 0.5743, 0.8828}};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double d = z[static_cast<std::size_t>(j)] - p[i][j];
      inner += a[i][j] * d * d;
    }
    total += alpha[i] * std::exp(-inner);
  }
  return -total;
}

double gap(std::span<const double> z) {
  const double x = z[0];
  const double c = z[1];
  const double left = std::exp(-(x - 0.2) * (x - 0.2) / 0.02);
  const double right = std::exp(-(x - 0.8) * (x - 0.8) / 0.02);
  return left * (0.5 + 0.5 * c) + 2.0 * right * (1.0 - c);
}

}  // namespace raw

BenchmarkFunction::BenchmarkFunction(std::string name, std::vector<Interval> input_box, Interval context_interval,
                                     Raw raw, bool negate, double noise_sigma)
    : name_(std::move(name)),
      input_box_(std::move(input_box)),
      context_(context_interval),
      raw_(raw),
      negate_(negate),
      noise_sigma_(noise_sigma) {
  if (!(noise_sigma_ >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
}

BenchmarkFunction BenchmarkFunction::with_negate(bool negate) const {
  BenchmarkFunction copy = *this;
  copy.negate_ = negate;
  return copy;
}

BenchmarkFunction BenchmarkFunction::with_noise(double noise_sigma) const {
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
  BenchmarkFunction copy = *this;
  copy.noise_sigma_ = noise_sigma;
  return copy;
}

InputBox BenchmarkFunction::box() const {
  InputBox box;
  for (const auto& iv : input_box_) {
    box.lo.push_back(iv.lo);
    box.hi.push_back(iv.hi);
  }
  return box;
}

std::vector<double> BenchmarkFunction::joint_widths() const {
  std::vector<double> w;
  for (const auto& iv : input_box_) w.push_back(iv.width());
  w.push_back(context_.width());
  return w;
}

double BenchmarkFunction::evaluate(std::span<const double> x, double c) const {
  if (x.size() != input_box_.size()) throw ConfigError(name_ + ": input has wrong dimension");
  std::vector<double> z(x.begin(), x.end());
  for (std::size_t d = 0; d < z.size(); ++d) {
    if (!inside(input_box_[d], z[d])) throw DomainError(name_ + ": input outside the domain box");
  }
  if (!inside(context_, c)) throw DomainError(name_ + ": context outside its interval");
  z.push_back(c);
  const double v = raw_(z);
  return negate_ ? -v : v;
}

double BenchmarkFunction::observe(std::span<const double> x, double c, std::mt19937_64& rng) const {
  const double v = evaluate(x, c);
  if (noise_sigma_ == 0.0) return v;
  return v + std::normal_distribution<double>(0.0, noise_sigma_)(rng);
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"branin", "goldstein_price", "six_hump_camel", "hartmann3", "gap"};
  return names;
}

BenchmarkFunction make_benchmark(const std::string& name) {
  if (name == "branin") return {name, {{-5.0, 10.0}}, {0.0, 15.0}, raw::branin, true};
  if (name == "goldstein_price") return {name, {{-2.0, 2.0}}, {-2.0, 2.0}, raw::goldstein_price, true};
  if (name == "six_hump_camel") return {name, {{-3.0, 3.0}}, {-2.0, 2.0}, raw::six_hump_camel, true};
  if (name == "hartmann3") return {name, {{0.0, 1.0}, {0.0, 1.0}}, {0.0, 1.0}, raw::hartmann3, true};
  if (name == "gap") return {name, {{0.0, 1.0}}, {0.0, 1.0}, raw::gap, false};
  std::string valid;
  for (const auto& n : benchmark_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown benchmark '" + name + "' (valid: " + valid + ")");
}

}  // namespace drbo
