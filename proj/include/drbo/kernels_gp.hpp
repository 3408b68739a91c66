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
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace drbo {

enum class KernelKind { SquaredExponential, Matern52 };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

// Stationary ARD kernel over the joint [x, c] space plus Gaussian noise level.
struct KernelSpec {
  KernelKind kind = KernelKind::SquaredExponential;
  std::vector<double> lengthscales;  // one per joint dimension
  double signal_variance = 1.0;
  double noise_variance = 1e-2;

  void validate() const;
  std::size_t dim() const { return lengthscales.size(); }
};

// A point of the joint space: optimization variables x followed by context c.
struct JointInput {
  std::vector<double> x;
  double c = 0.0;

  std::vector<double> flatten() const;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> a, std::span<const double> b);
double kernel_eval(const KernelSpec& spec, const JointInput& a, const JointInput& b);

// Cross-covariance between row sets: out(i, j) = k(a.row(i), b.row(j)).
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

class Dataset {
 public:
  explicit Dataset(std::size_t joint_dim) : dim_(joint_dim) {}

  void add(std::span<const double> z, double y);
  void add(const JointInput& z, double y);

  std::size_t size() const { return y_.size(); }
  bool empty() const { return y_.empty(); }
  std::size_t joint_dim() const { return dim_; }
  std::span<const double> input(std::size_t i) const;
  double target(std::size_t i) const { return y_[i]; }

  // Rows are joint inputs.
  Eigen::MatrixXd inputs() const;
  Eigen::VectorXd targets() const;

 private:
  std::size_t dim_;
  std::vector<double> z_;
  std::vector<double> y_;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// Anything that answers predictive mean/variance at joint inputs. The
// acquisition layer only talks to this, so tests can plant analytic surfaces.
class Surrogate {
 public:
  virtual ~Surrogate() = default;
  virtual std::size_t joint_dim() const = 0;
  // queries: one joint input per row. Resizes mean/variance to queries.rows().
  virtual void predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                             Eigen::VectorXd& variance) const = 0;
};

struct GpOptions {
  bool center_targets = false;
};

/// Exact GP regression with a zero-mean prior.
///
/// Holds L with L L^T = K + (noise + jitter) I and alpha = (K + (noise + jitter) I)^{-1} y.
/// The jitter starts at 1e-8 * signal_variance and is escalated by 10x up to
/// 1e-4 * signal_variance when the Cholesky factorization fails. Immutable
/// after fit; concurrent predictions are safe.
class GpPosterior final : public Surrogate {
 public:
  static GpPosterior fit(const Dataset& data, const KernelSpec& spec, const GpOptions& options = {});

  Prediction predict(std::span<const double> z) const;
  Prediction predict(const JointInput& z) const;
  void predict_batch(const Eigen::MatrixXd& queries, Eigen::VectorXd& mean,
                     Eigen::VectorXd& variance) const override;

  std::size_t joint_dim() const override { return spec_.dim(); }
  std::size_t size() const { return static_cast<std::size_t>(inputs_.rows()); }
  const KernelSpec& kernel() const { return spec_; }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  const Eigen::VectorXd& weight_vector() const { return alpha_; }
  double jitter() const { return jitter_; }
  double target_offset() const { return offset_; }

  // -1/2 y^T alpha - sum log L_ii - (t/2) log 2 pi, with y the (possibly centered) targets.
  double log_marginal_likelihood() const;

 private:
  GpPosterior() = default;

  KernelSpec spec_;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double offset_ = 0.0;
};

double log_marginal_likelihood(const Dataset& data, const KernelSpec& spec, const GpOptions& options = {});

// Grid argmax of the log marginal likelihood; ties go to the earliest entry.
// Entries whose factorization fails are skipped.
KernelSpec fit_hyperparams(const Dataset& data, std::span<const KernelSpec> grid,
                           const GpOptions& options = {});

// The 8 lengthscale multipliers, log-spaced over [0.05, 2.0].
std::vector<double> lengthscale_multipliers();

// Input dimensions share one multiplier, the context dimension has its own;
// each is scaled by that dimension's width. Crossed with signal variances
// {0.5, 1, 2}: 8 x 8 x 3 specs, input multiplier outermost.
std::vector<KernelSpec> default_kernel_grid(KernelKind kind, std::span<const double> joint_widths,
                                            double noise_variance = 1e-2, double signal_scale = 1.0);

}  // namespace drbo
