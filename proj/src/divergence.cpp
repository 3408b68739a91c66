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

#include "drbo/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "drbo/errors.hpp"

namespace drbo {
namespace {

constexpr double kFeasibilitySlack = 1e-12;

void check_weights(std::span<const double> f, std::span<const double> weights) {
  if (f.empty()) throw DomainError("empty value vector");
  if (f.size() != weights.size()) throw DomainError("values and weights differ in length");
  for (double v : f) {
    if (!std::isfinite(v)) throw DomainError("non-finite value in f");
  }
}

void check_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("radius eps must be finite and >= 0");
}

// phi(u) - phi'(1) (u - 1): nonnegative, and sums to D_phi over a probability vector.
double shifted_term(Divergence kind, double q, double p) {
  if (p <= 0.0) {
    if (q <= 0.0) return 0.0;
    return kind == Divergence::TotalVariation ? q : kPlusInfinity;
  }
  const double u = q / p;
  switch (kind) {
    case Divergence::Chi2:
      return p * (u - 1.0) * (u - 1.0);
    case Divergence::TotalVariation:
      return p * std::abs(u - 1.0);
    case Divergence::KL:
      return p * (phi(kind, u) - (u - 1.0));
  }
  return kPlusInfinity;
}

struct OracleSearch {
  Divergence kind;
  std::span<const double> f;
  std::span<const double> p;
  double eps;
  double step;
  std::vector<double> q;
  std::vector<double> best_q;
  double best = kPlusInfinity;

  void visit(std::size_t j, long long ksum, double partial_div, double partial_value) {
    const std::size_t n = f.size();
    if (j + 1 == n) {
      const double qj = p[j] - step * static_cast<double>(ksum);
      if (!place(j, qj)) return;
      const double div = partial_div + shifted_term(kind, q[j], p[j]);
      if (div > eps + kFeasibilitySlack) return;
      const double value = partial_value + q[j] * f[j];
      if (value < best) {
        best = value;
        best_q = q;
      }
      return;
    }
    const auto lo = static_cast<long long>(std::ceil(-p[j] / step - 1e-9));
    const auto hi = static_cast<long long>(std::floor((1.0 - p[j]) / step + 1e-9));
    for (long long k = lo; k <= hi; ++k) {
      if (!place(j, p[j] + step * static_cast<double>(k))) continue;
      const double div = partial_div + shifted_term(kind, q[j], p[j]);
      if (div > eps + kFeasibilitySlack) continue;
      visit(j + 1, ksum + k, div, partial_value + q[j] * f[j]);
    }
  }

  bool place(std::size_t j, double value) {
    if (value < -1e-12 || value > 1.0 + 1e-12) return false;
    q[j] = std::clamp(value, 0.0, 1.0);
    return true;
  }
};

}  // namespace

std::string_view to_string(Divergence kind) {
  switch (kind) {
    case Divergence::Chi2:
      return "chi2";
    case Divergence::TotalVariation:
      return "tv";
    case Divergence::KL:
      return "kl";
  }
  return "?";
}

Divergence divergence_from_string(std::string_view name) {
  if (name == "chi2") return Divergence::Chi2;
  if (name == "tv") return Divergence::TotalVariation;
  if (name == "kl") return Divergence::KL;
  throw ConfigError("unknown divergence '" + std::string(name) + "' (valid: chi2, tv, kl)");
}

ContextSet ContextSet::uniform(std::vector<double> supports) {
  ContextSet set;
  const double w = supports.empty() ? 0.0 : 1.0 / static_cast<double>(supports.size());
  set.weights.assign(supports.size(), w);
  set.supports = std::move(supports);
  return set;
}

void ContextSet::validate() const {
  if (supports.empty()) throw ConfigError("context set is empty");
  if (supports.size() != weights.size()) throw ConfigError("context set: supports and weights differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("context set: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("context set: weights do not sum to 1");
}

double phi(Divergence kind, double u) {
  switch (kind) {
    case Divergence::Chi2:
      return (u - 1.0) * (u - 1.0);
    case Divergence::TotalVariation:
      return std::abs(u - 1.0);
    case Divergence::KL:
      if (u < 0.0) return kPlusInfinity;
      return u == 0.0 ? 0.0 : u * std::log(u);
  }
  return kPlusInfinity;
}

double divergence_value(Divergence kind, std::span<const double> q, std::span<const double> p) {
  if (q.size() != p.size()) throw DomainError("divergence_value: q and p differ in length");
  double d = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) d += shifted_term(kind, q[j], p[j]);
  return d;
}

double phi_conjugate(Divergence kind, double u, double lambda) {
  switch (kind) {
    case Divergence::Chi2:
      if (!(lambda > 0.0)) throw DomainError("chi2 conjugate needs lambda > 0");
      return u * u / (4.0 * lambda) + u;
    case Divergence::TotalVariation:
      if (!(lambda >= 0.0)) throw DomainError("tv conjugate needs lambda >= 0");
      return std::abs(u) <= lambda ? u : kPlusInfinity;
    case Divergence::KL:
      if (!(lambda > 0.0)) throw DomainError("kl conjugate needs lambda > 0");
      return lambda * std::exp(u / lambda - 1.0);
  }
  return kPlusInfinity;
}

double dual_objective(Divergence kind, std::span<const double> f, std::span<const double> weights, double eps,
                      DualPoint dp) {
  check_weights(f, weights);
  check_eps(eps);
  double expectation = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (weights[j] == 0.0) continue;
    const double conj = phi_conjugate(kind, dp.b - f[j], dp.lambda);
    if (conj == kPlusInfinity) return -kPlusInfinity;
    expectation += weights[j] * conj;
  }
  return dp.b - dp.lambda * eps - expectation;
}

double weighted_mean(std::span<const double> f, std::span<const double> weights) {
  return std::inner_product(f.begin(), f.end(), weights.begin(), 0.0);
}

double weighted_variance(std::span<const double> f, std::span<const double> weights) {
  const double m = weighted_mean(f, weights);
  double v = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) v += weights[j] * (f[j] - m) * (f[j] - m);
  return v;
}

double robust_value_chi2(std::span<const double> f, std::span<const double> weights, double eps) {
  check_weights(f, weights);
  check_eps(eps);
  return weighted_mean(f, weights) - std::sqrt(eps * weighted_variance(f, weights));
}

double robust_value_tv(std::span<const double> f, std::span<const double> weights, double eps) {
  check_weights(f, weights);
  check_eps(eps);
  double lo = kPlusInfinity;
  double hi = -kPlusInfinity;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (weights[j] == 0.0) continue;
    lo = std::min(lo, f[j]);
    hi = std::max(hi, f[j]);
  }
  return weighted_mean(f, weights) - 0.5 * eps * (hi - lo);
}

double robust_value_kl(std::span<const double> f, std::span<const double> weights, double eps,
                       std::span<const double> lambda_grid) {
  check_weights(f, weights);
  check_eps(eps);
  if (lambda_grid.empty()) throw DomainError("robust_value_kl: empty lambda grid");
  double fmin = kPlusInfinity;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (weights[j] > 0.0) fmin = std::min(fmin, f[j]);
  }
  double best = -kPlusInfinity;
  for (double lambda : lambda_grid) {
    if (!(lambda > 0.0)) throw DomainError("robust_value_kl: lambda grid must be positive");
    // log-sum-exp shifted by the smallest value keeps every exponent <= 0.
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (weights[j] > 0.0) s += weights[j] * std::exp(-(f[j] - fmin) / lambda);
    }
    best = std::max(best, fmin - lambda * eps - lambda * std::log(s));
  }
  return best;
}

double robust_value(Divergence kind, std::span<const double> f, std::span<const double> weights, double eps,
                    std::span<const double> lambda_grid) {
  switch (kind) {
    case Divergence::Chi2:
      return robust_value_chi2(f, weights, eps);
    case Divergence::TotalVariation:
      return robust_value_tv(f, weights, eps);
    case Divergence::KL:
      return robust_value_kl(f, weights, eps, lambda_grid);
  }
  return 0.0;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw DomainError("log_spaced: need 0 < lo <= hi, count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

const std::vector<double>& default_kl_lambda_grid() {
  static const std::vector<double> grid = log_spaced(1e-3, 1e3, 64);
  return grid;
}

OracleResult worst_case_oracle(Divergence kind, std::span<const double> f, std::span<const double> weights,
                               double eps, double step) {
  check_weights(f, weights);
  check_eps(eps);
  if (f.size() > 4) throw DomainError("worst_case_oracle: at most 4 atoms");
  if (!(step > 0.0) || step > 0.1) throw DomainError("worst_case_oracle: step must lie in (0, 0.1]");

  OracleSearch search{kind, f, weights, eps, step, std::vector<double>(f.size(), 0.0), {}, kPlusInfinity};
  search.visit(0, 0, 0.0, 0.0);
  if (search.best_q.empty()) {
    // q = p is always on the lattice and inside the ball.
    throw NumericalError("worst_case_oracle: empty feasible set");
  }
  return {search.best, std::move(search.best_q)};
}

double gamma_map(Divergence kind, double d) {
  if (!(d >= 0.0)) throw DomainError("gamma_map: argument must be >= 0");
  switch (kind) {
    case Divergence::TotalVariation:
      return d;
    case Divergence::Chi2:
      return 2.0 * std::sqrt(d / (1.0 + d));
    case Divergence::KL:
      return -std::expm1(-d);
  }
  return 0.0;
}

double gamma_inverse(Divergence kind, double y) {
  if (!(y >= 0.0)) throw DomainError("gamma_inverse: argument must be >= 0");
  switch (kind) {
    case Divergence::TotalVariation:
      return y;
    case Divergence::Chi2: {
      if (!(y < 2.0)) throw DomainError("gamma_inverse(chi2): argument must be < 2");
      const double s = 0.25 * y * y;
      return s / (1.0 - s);
    }
    case Divergence::KL:
      if (!(y < 1.0)) throw DomainError("gamma_inverse(kl): argument must be < 1");
      return -std::log1p(-y);
  }
  return 0.0;
}

RadiusSchedule RadiusSchedule::fixed(double eps) {
  check_eps(eps);
  RadiusSchedule s;
  s.kind_ = Kind::Fixed;
  s.eps_ = eps;
  return s;
}

RadiusSchedule RadiusSchedule::adaptive(Divergence kind) {
  RadiusSchedule s;
  s.kind_ = Kind::Adaptive;
  s.divergence_ = kind;
  return s;
}

double epsilon_at(const RadiusSchedule& schedule, std::size_t t) {
  if (t == 0) throw DomainError("epsilon_at: iterations are numbered from 1");
  if (schedule.kind() == RadiusSchedule::Kind::Fixed) return schedule.fixed_eps();
  const double td = static_cast<double>(t);
  return gamma_inverse(schedule.divergence(), 1.0 / (std::sqrt(td) + std::sqrt(td + 1.0)));
}

}  // namespace drbo
