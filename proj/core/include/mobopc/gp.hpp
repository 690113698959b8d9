// Copyright 2026 The mobopc Authors
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

#ifndef MOBOPC_GP_HPP
#define MOBOPC_GP_HPP

#include <Eigen/Core>

#include "mobopc/rng.hpp"

namespace mobopc {

/// Squared-exponential kernel with per-dimension (ARD) lengthscales:
///   k(a, b) = signal_variance * exp(-0.5 * sum_d ((a_d - b_d) / l_d)^2)
/// plus the observation noise variance of the associated GP.
struct KernelSpec {
  double signal_variance = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_variance = 0.0;

  /// Throws InvalidDataError unless lengthscales > 0, signal_variance > 0
  /// and noise_variance >= 0.
  void validate() const;

  double value(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Gradient of k(a, b) with respect to a.
  Eigen::VectorXd grad_a(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  /// Cross second derivative d/da d/db^T k(a, b) (n x n).
  Eigen::MatrixXd cross_hessian(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

/// Joint Gaussian posterior of the gradient of the latent function at one
/// query point. `sample_factor` satisfies F * F^T ~= covariance with
/// negative eigenvalues clamped to zero, so degenerate posteriors sample
/// exactly at the mean.
struct GradientPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd sample_factor;
};

/// Box constraints for hyperparameter fitting (all in variance/length units,
/// not log units). `auto_for` derives a data-driven box: lengthscales within
/// [1e-2, 10] times the per-dimension input range, signal variance within
/// [1e-4, 1e2] times var(y), and noise variance within [1e-6, 1] times
/// var(y). The noise floor keeps the training covariance well conditioned.
struct HyperBounds {
  Eigen::VectorXd lengthscale_lo, lengthscale_hi;
  double signal_lo = 0.0, signal_hi = 0.0;
  double noise_lo = 0.0, noise_hi = 0.0;

  static HyperBounds auto_for(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);
};

/// Zero-mean Gaussian-process regressor. Immutable once constructed; safe
/// for concurrent reads.
class GpModel {
 public:
  /// Builds a model with the given (already chosen) hyperparameters and
  /// caches the Cholesky factor of K + noise*I (+ escalating jitter).
  GpModel(KernelSpec kernel, Eigen::MatrixXd inputs, Eigen::VectorXd targets);

  /// Chooses hyperparameters by multi-start maximisation of the log
  /// marginal likelihood inside `bounds` (5 restarts, log-space search).
  /// `warm_start`, when given, seeds the first restart. Deterministic.
  static GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const HyperBounds& bounds, const KernelSpec* warm_start = nullptr);
  static GpModel fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets);

  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
  };

  /// Posterior mean and (clipped, non-negative) variance at x.
  Prediction posterior(const Eigen::VectorXd& x) const;

  /// Posterior of the gradient of the latent function at x.
  GradientPosterior gradient_posterior(const Eigen::VectorXd& x) const;

  double log_marginal_likelihood() const { return log_marginal_likelihood_; }
  const KernelSpec& kernel() const { return kernel_; }
  const Eigen::MatrixXd& train_inputs() const { return train_inputs_; }
  const Eigen::VectorXd& train_targets() const { return train_targets_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_factor_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double jitter() const { return jitter_; }
  int input_dim() const { return static_cast<int>(train_inputs_.cols()); }
  int num_train() const { return static_cast<int>(train_inputs_.rows()); }

 private:
  KernelSpec kernel_;
  Eigen::MatrixXd train_inputs_;
  Eigen::VectorXd train_targets_;
  Eigen::MatrixXd chol_factor_;  // lower triangular
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double log_marginal_likelihood_ = 0.0;
};

/// Draws one gradient vector from the posterior: mean + F z with z iid
/// standard normal. Zero covariance returns the mean exactly.
Eigen::VectorXd sample_gradient(const GradientPosterior& posterior, Rng& rng);

}  // namespace mobopc

#endif  // MOBOPC_GP_HPP
