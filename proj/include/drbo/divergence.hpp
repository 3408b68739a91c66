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
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace drbo {

enum class Divergence { Chi2, TotalVariation, KL };

std::string_view to_string(Divergence kind);
Divergence divergence_from_string(std::string_view name);

// Value used for +infinity in conjugates; never produced by overflow.
inline constexpr double kPlusInfinity = std::numeric_limits<double>::infinity();

// Finite support with a probability vector over it.
struct ContextSet {
  std::vector<double> supports;
  std::vector<double> weights;

  static ContextSet uniform(std::vector<double> supports);
  void validate() const;
  std::size_t size() const { return supports.size(); }
};

// Generator phi with phi(1) = 0: (u-1)^2, |u-1|, u log u.
double phi(Divergence kind, double u);

// D_phi(q, p) = sum_j p_j phi(q_j / p_j).
double divergence_value(Divergence kind, std::span<const double> q, std::span<const double> p);

/// Convex conjugate of lambda * phi evaluated at u.
///
///   chi2: u^2 / (4 lambda) + u
///   tv:   u when |u| <= lambda, kPlusInfinity otherwise
///   kl:   lambda * exp(u / lambda - 1)
double phi_conjugate(Divergence kind, double u, double lambda);

struct DualPoint {
  double lambda = 1.0;
  double b = 0.0;
};

// b - lambda * eps - E_p[(lambda phi)^*(b - f)]; a lower bound on the worst
// case expectation for every feasible dual point. -inf when the TV conjugate
// is infinite.
double dual_objective(Divergence kind, std::span<const double> f, std::span<const double> weights, double eps,
                      DualPoint dp);

double weighted_mean(std::span<const double> f, std::span<const double> weights);
// Population variance under weights.
double weighted_variance(std::span<const double> f, std::span<const double> weights);

double robust_value_chi2(std::span<const double> f, std::span<const double> weights, double eps);
double robust_value_tv(std::span<const double> f, std::span<const double> weights, double eps);
// max over lambda in grid of -lambda eps - lambda log E_p[exp(-f / lambda)].
double robust_value_kl(std::span<const double> f, std::span<const double> weights, double eps,
                       std::span<const double> lambda_grid);
// Dispatch on kind; lambda_grid is only read for KL.
double robust_value(Divergence kind, std::span<const double> f, std::span<const double> weights, double eps,
                    std::span<const double> lambda_grid);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);
// 64 points log-spaced over [1e-3, 1e3].
const std::vector<double>& default_kl_lambda_grid();

struct OracleResult {
  double value = 0.0;
  std::vector<double> q;
};

/// Brute-force worst-case expectation over {q : D_phi(q, p) <= eps}.
///
/// Enumerates the lattice q = p + step * k (k integer, sum k = 0) intersected
/// with the simplex, so p itself is always a candidate. Exhaustive, hence
/// restricted to at most 4 atoms. The result is never below the true infimum
/// and exceeds it by at most about (max f - min f) * step * |f|.
OracleResult worst_case_oracle(Divergence kind, std::span<const double> f, std::span<const double> weights,
                               double eps, double step = 0.005);

// Monotone map with TV(p, q) <= gamma_map(D_phi(p, q)).
double gamma_map(Divergence kind, double d);
double gamma_inverse(Divergence kind, double y);

class RadiusSchedule {
 public:
  enum class Kind { Fixed, Adaptive };

  static RadiusSchedule fixed(double eps);
  // eps_t = gamma_inverse(1 / (sqrt(t) + sqrt(t + 1))).
  static RadiusSchedule adaptive(Divergence kind);

  Kind kind() const { return kind_; }
  double fixed_eps() const { return eps_; }
  Divergence divergence() const { return divergence_; }

 private:
  Kind kind_ = Kind::Fixed;
  double eps_ = 0.0;
  Divergence divergence_ = Divergence::TotalVariation;
};

double epsilon_at(const RadiusSchedule& schedule, std::size_t t);

}  // namespace drbo
