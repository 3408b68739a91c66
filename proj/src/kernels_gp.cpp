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

#include "drbo/kernels_gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "drbo/errors.hpp"

namespace drbo {
namespace {

constexpr double kInitialJitter = 1e-8;
constexpr double kMaxJitter = 1e-4;

// Kernel value as a function of the scaled distance r.
double kernel_of_distance(KernelKind kind, double signal_variance, double r2) {
  switch (kind) {
    case KernelKind::SquaredExponential:
      return signal_variance * std::exp(-0.5 * r2);
    case KernelKind::Matern52: {
      const double r = std::sqrt(r2);
      const double s5r = std::sqrt(5.0) * r;
      return signal_variance * (1.0 + s5r + 5.0 * r2 / 3.0) * std::exp(-s5r);
    }
  }
  return 0.0;
}

std::string condition_report(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  std::ostringstream os;
  if (eig.info() != Eigen::Success) {
    os << "eigenvalue computation failed";
    return os.str();
  }
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  os << "size " << m.rows() << ", eigenvalues in [" << lo << ", " << hi << "]";
  if (lo > 0.0) os << ", condition number " << hi / lo;
  return os.str();
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::SquaredExponential:
      return "se";
    case KernelKind::Matern52:
      return "matern52";
  }
  return "?";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "se" || name == "rbf" || name == "squared_exponential") return KernelKind::SquaredExponential;
  if (name == "matern52") return KernelKind::Matern52;
  throw ConfigError("unknown kernel '" + std::string(name) + "' (valid: se, matern52)");
}

void KernelSpec::validate() const {
  if (lengthscales.empty()) throw ConfigError("kernel needs at least one lengthscale");
  for (double l : lengthscales) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("kernel lengthscales must be positive and finite");
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw ConfigError("kernel signal_variance must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw ConfigError("kernel noise_variance must be nonnegative");
  }
}

std::vector<double> JointInput::flatten() const {
  std::vector<double> z(x);
  z.push_back(c);
  return z;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b) {
  if (a.size() != spec.dim() || b.size() != spec.dim()) {
    throw ConfigError("kernel_eval: input dimension does not match lengthscales");
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) / spec.lengthscales[i];
    r2 += d * d;
  }
  return kernel_of_distance(spec.kind, spec.signal_variance, r2);
}

double kernel_eval(const KernelSpec& spec, const JointInput& a, const JointInput& b) {
  const auto za = a.flatten();
  const auto zb = b.flatten();
  return kernel_eval(spec, za, zb);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto dim = static_cast<Eigen::Index>(spec.dim());
  if (a.cols() != dim || b.cols() != dim) {
    throw ConfigError("kernel_matrix: input dimension does not match lengthscales");
  }
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      double r2 = 0.0;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double d = (a(i, k) - b(j, k)) / spec.lengthscales[static_cast<std::size_t>(k)];
        r2 += d * d;
      }
      out(i, j) = kernel_of_distance(spec.kind, spec.signal_variance, r2);
    }
  }
  return out;
}

void Dataset::add(std::span<const double> z, double y) {
  if (z.size() != dim_) throw ConfigError("Dataset::add: joint input has wrong dimension");
  z_.insert(z_.end(), z.begin(), z.end());
  y_.push_back(y);
}

void Dataset::add(const JointInput& z, double y) {
  const auto flat = z.flatten();
  add(flat, y);
}

std::span<const double> Dataset::input(std::size_t i) const {
  return std::span<const double>(z_).subspan(i * dim_, dim_);
}

Eigen::MatrixXd Dataset::inputs() const {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = z_[i * dim_ + k];
    }
  }
  return m;
}

Eigen::VectorXd Dataset::targets() const {
  return Eigen::Map<const Eigen::VectorXd>(y_.data(), static_cast<Eigen::Index>(y_.size()));
}

GpPosterior GpPosterior::fit(const Dataset& data, const KernelSpec& spec, const GpOptions& options) {
  spec.validate();
  if (data.empty()) throw ConfigError("gp_fit: dataset is empty");
  if (data.joint_dim() != spec.dim()) throw ConfigError("gp_fit: dataset dimension does not match kernel");

  GpPosterior post;
  post.spec_ = spec;
  post.inputs_ = data.inputs();
  post.targets_ = data.targets();
  if (options.center_targets) {
    post.offset_ = post.targets_.mean();
    post.targets_.array() -= post.offset_;
  }

  const Eigen::MatrixXd gram = kernel_matrix(spec, post.inputs_, post.inputs_);
  const auto n = gram.rows();
  for (double rel = kInitialJitter; rel <= kMaxJitter * 1.0000001; rel *= 10.0) {
    const double jitter = rel * spec.signal_variance;
    Eigen::MatrixXd k = gram;
    k.diagonal().array() += spec.noise_variance + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd l = llt.matrixL();
    if ((l.diagonal().array() <= 0.0).any() || !l.allFinite()) continue;
    post.chol_ = std::move(l);
    post.jitter_ = jitter;
    post.alpha_ = llt.solve(post.targets_);
    if (!post.alpha_.allFinite()) throw NumericalError("gp_fit: non-finite weight vector");
    return post;
  }
  Eigen::MatrixXd k = gram;
  k.diagonal().array() += spec.noise_variance;
  throw NumericalError("gp_fit: Cholesky failed up to jitter " + std::to_string(kMaxJitter * spec.signal_variance) +
                       " (" + std::to_string(n) + " points); " + condition_report(k));
}

Prediction GpPosterior::predict(std::span<const double> z) const {
  if (z.size() != spec_.dim()) throw ConfigError("gp_predict: query has wrong dimension");
  Eigen::MatrixXd q = Eigen::Map<const Eigen::RowVectorXd>(z.data(), static_cast<Eigen::Index>(z.size()));
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  predict_batch(q, mean, var);
  return {mean(0), var(0)};
}

Prediction GpPosterior::predict(const JointInput& z) const {
  const auto flat = z.flatten();
  return predict(flat);
}

void GpPosterior::predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                                Eigen::VectorXd& variance) const {
  if (queries.cols() != static_cast<Eigen::Index>(spec_.dim())) {
    throw ConfigError("gp_predict: query has wrong dimension");
  }
  Eigen::MatrixXd cross = kernel_matrix(spec_, inputs_, queries);  // t x m
  mean = cross.transpose() * alpha_;
  mean.array() += offset_;
  chol_.triangularView<Eigen::Lower>().solveInPlace(cross);
  variance = (spec_.signal_variance - cross.colwise().squaredNorm().array()).max(0.0).matrix().transpose();
}

double GpPosterior::log_marginal_likelihood() const {
  const double t = static_cast<double>(targets_.size());
  return -0.5 * targets_.dot(alpha_) - chol_.diagonal().array().log().sum() -
         0.5 * t * std::log(2.0 * std::numbers::pi);
}

double log_marginal_likelihood(const Dataset& data, const KernelSpec& spec, const GpOptions& options) {
  return GpPosterior::fit(data, spec, options).log_marginal_likelihood();
}

KernelSpec fit_hyperparams(const Dataset& data, std::span<const KernelSpec> grid, const GpOptions& options) {
  if (grid.empty()) throw ConfigError("fit_hyperparams: empty grid");
  const KernelSpec* best = nullptr;
  double best_lml = -std::numeric_limits<double>::infinity();
  for (const auto& spec : grid) {
    double lml = 0.0;
    try {
      lml = log_marginal_likelihood(data, spec, options);
    } catch (const NumericalError&) {
      continue;
    }
    if (best == nullptr || lml > best_lml) {
      best = &spec;
      best_lml = lml;
    }
  }
  if (best == nullptr) throw NumericalError("fit_hyperparams: every grid entry failed to factorize");
  return *best;
}

std::vector<KernelSpec> default_kernel_grid(KernelKind kind, std::span<const double> joint_widths,
                                            double noise_variance, double signal_scale) {
  constexpr std::size_t kLengthscaleCount = 8;
  constexpr double kSignalVariances[] = {0.5, 1.0, 2.0};
  if (joint_widths.empty()) throw ConfigError("default_kernel_grid: no dimensions");
  if (!(signal_scale > 0.0) || !std::isfinite(signal_scale)) throw ConfigError("default_kernel_grid: bad signal scale");
  const auto mults = lengthscale_multipliers();
  const std::size_t last = joint_widths.size() - 1;
  std::vector<KernelSpec> grid;
  grid.reserve(kLengthscaleCount * kLengthscaleCount * std::size(kSignalVariances));
  for (double input_mult : mults) {
    for (double context_mult : mults) {
      for (double sv : kSignalVariances) {
        KernelSpec spec;
        spec.kind = kind;
        spec.signal_variance = sv * signal_scale;
        spec.noise_variance = noise_variance;
        for (std::size_t d = 0; d < last; ++d) spec.lengthscales.push_back(input_mult * joint_widths[d]);
        spec.lengthscales.push_back(context_mult * joint_widths[last]);
        grid.push_back(std::move(spec));
      }
    }
  }
  return grid;
}

std::vector<double> lengthscale_multipliers() {
  constexpr int kCount = 8;
  constexpr double kLo = 0.05;
  constexpr double kHi = 2.0;
  std::vector<double> out;
  for (int i = 0; i < kCount; ++i) out.push_back(kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kCount - 1)));
  return out;
}

}  // namespace drbo
