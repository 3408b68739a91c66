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

#include "drbo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "drbo/errors.hpp"

namespace drbo {

ClosedForms ClosedForms::reference() {
  ClosedForms forms;
  forms.chi2 = [](std::span<const double> f, std::span<const double> w, double eps) {
    return robust_value_chi2(f, w, eps);
  };
  forms.tv = [](std::span<const double> f, std::span<const double> w, double eps) {
    return robust_value_tv(f, w, eps);
  };
  forms.kl = [](std::span<const double> f, std::span<const double> w, double eps) {
    return robust_value_kl(f, w, eps, default_kl_lambda_grid());
  };
  return forms;
}

const ClosedForms::Fn& ClosedForms::get(Divergence kind) const {
  switch (kind) {
    case Divergence::Chi2:
      return chi2;
    case Divergence::TotalVariation:
      return tv;
    case Divergence::KL:
      return kl;
  }
  return tv;
}

VerifyProfile VerifyProfile::named(const std::string& name) {
  VerifyProfile p;
  if (name == "default") return p;
  if (name == "quick") {
    p.instances = 10;
    return p;
  }
  throw ConfigError("unknown tolerance profile '" + name + "' (valid: default, quick)");
}

std::vector<VerifyCheck> run_verification(const VerifyProfile& profile, std::optional<Divergence> only,
                                          const ClosedForms& forms) {
  std::mt19937_64 rng(profile.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::vector<double>> instances(profile.instances, std::vector<double>(profile.atoms));
  for (auto& f : instances) {
    for (auto& v : f) v = unit(rng);
  }
  const std::vector<double> weights(profile.atoms, 1.0 / static_cast<double>(profile.atoms));
  const auto lambdas = log_spaced(1e-2, 1e2, profile.dual_grid);
  std::vector<double> bs(profile.dual_grid);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    bs[i] = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(bs.size() - 1, 1));
  }

  std::vector<VerifyCheck> checks;
  for (Divergence kind : {Divergence::Chi2, Divergence::TotalVariation, Divergence::KL}) {
    if (only && *only != kind) continue;
    const auto& closed = forms.get(kind);
    const std::string prefix(to_string(kind));
    const double tol = kind == Divergence::KL ? profile.tolerance_kl : profile.tolerance_chi2_tv;
    VerifyCheck agree{prefix + "/closed_form_vs_oracle", kind, true, 0.0, tol, 0};
    VerifyCheck duality{prefix + "/weak_duality", kind, true, 0.0, profile.dual_tolerance, 0};
    VerifyCheck monotone{prefix + "/monotone_in_eps", kind, true, 0.0, 1e-12, 0};
    VerifyCheck dominance{prefix + "/below_mean", kind, true, 0.0, 1e-12, 0};

    for (const auto& f : instances) {
      const double mean = weighted_mean(f, weights);
      double previous = kPlusInfinity;
      for (double eps : profile.eps_values) {
        const auto oracle = worst_case_oracle(kind, f, weights, eps, profile.oracle_step);
        const double value = closed(f, weights, eps);

        agree.worst = std::max(agree.worst, std::abs(value - oracle.value));
        ++agree.cases;

        double best_dual = -kPlusInfinity;
        for (double lambda : lambdas) {
          for (double b : bs) best_dual = std::max(best_dual, dual_objective(kind, f, weights, eps, {lambda, b}));
        }
        duality.worst = std::max(duality.worst, best_dual - oracle.value);
        ++duality.cases;

        monotone.worst = std::max(monotone.worst, value - previous);
        previous = value;
        ++monotone.cases;

        dominance.worst = std::max(dominance.worst, value - mean);
        ++dominance.cases;
      }
    }
    agree.passed = agree.worst <= agree.tolerance;
    duality.passed = duality.worst <= duality.tolerance;
    monotone.passed = monotone.worst <= monotone.tolerance;
    dominance.passed = dominance.worst <= dominance.tolerance;
    checks.push_back(agree);
    checks.push_back(duality);
    checks.push_back(monotone);
    checks.push_back(dominance);
  }
  return checks;
}

}  // namespace drbo
