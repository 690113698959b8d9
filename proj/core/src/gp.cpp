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

#include "mobopc/gp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mobopc/errors.hpp"

namespace mobopc {

namespace {

constexpr double kVarianceClipFloor = -1e-9;
constexpr double kGradEigFloor = -1e-8;
constexpr double kJitterStartFactor = 1e-10;
constexpr double kJitterCapFactor = 1e-4;

Eigen::MatrixXd kernel_matrix(const KernelSpec& kernel, const Eigen::MatrixXd& inputs) {
  const int n = static_cast<int>(inputs.rows());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    gram(i, i) = kernel.signal_variance;
    for (int j = 0; j < i; ++j) {
      const double value = kernel.value(inputs.row(i).transpose(), inputs.row(j).transpose());
      gram(i, j) = value;
      gram(j, i) = value;
    }
  }
  return gram;
}

struct Factorization {
  Eigen::MatrixXd chol;  // lower
  double jitter = 0.0;
};

/// Cholesky of gram + noise*I + jitter*I with jitter escalating from
/// 1e-10*signal to 1e-4*signal in decades. Empty on failure.
std::optional<Factorization> factorize(const Eigen::MatrixXd& gram, double noise_variance,
                                       double signal_variance) {
  Eigen::MatrixXd working = gram;
  working.diagonal().array() += noise_variance;
  double jitter = kJitterStartFactor * signal_variance;
  const double cap = kJitterCapFactor * signal_variance;

  // First attempt without jitter, then escalate.
  for (double current = 0.0;; current = (current == 0.0 ? jitter : current * 10.0)) {
    Eigen::MatrixXd trial = working;
    trial.diagonal().array() += current;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      return Factorization{Eigen::MatrixXd(llt.matrixL()), current};
    }
    if (current >= cap) return std::nullopt;
    if (current > 0.0 && current * 10.0 > cap) {
      // Final attempt exactly at the cap.
      Eigen::MatrixXd last = working;
      last.diagonal().array() += cap;
      Eigen::LLT<Eigen::MatrixXd> llt_cap(last);
      if (llt_cap.info() == Eigen::Success) {
        return Factorization{Eigen::MatrixXd(llt_cap.matrixL()), cap};
      }
      return std::nullopt;
    }
  }
}

double log_marginal(const Eigen::MatrixXd& chol, const Eigen::VectorXd& alpha,
                    const Eigen::VectorXd& targets) {
  const double n = static_cast<double>(targets.size());
  return -0.5 * targets.dot(alpha) - chol.diagonal().array().log().sum() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

/// Nelder-Mead minimisation with box clamping; returns the best point seen.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& start, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi, int max_evals) {
  const int dim = static_cast<int>(start.size());
  const auto clamp = [&](Eigen::VectorXd p) {
    for (int i = 0; i < dim; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
  };

  int evals = 0;
  Eigen::VectorXd best_point = clamp(start);
  double best_value = std::numeric_limits<double>::infinity();
  const auto eval = [&](const Eigen::VectorXd& p) {
    const Eigen::VectorXd q = clamp(p);
    double value = fn(q);
    // Pull escaped simplex vertices back toward the box.
    value += 10.0 * (p - q).squaredNorm();
    ++evals;
    if (value < best_value) {
      best_value = value;
      best_point = q;
    }
    return value;
  };

  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(dim) + 1);
  std::vector<double> values(static_cast<std::size_t>(dim) + 1);
  simplex[0] = clamp(start);
  values[0] = eval(simplex[0]);
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd vertex = simplex[0];
    const double step = 0.10 * (hi[i] - lo[i]);
    vertex[i] += (vertex[i] + step <= hi[i]) ? step : -step;
    simplex[static_cast<std::size_t>(i) + 1] = vertex;
    values[static_cast<std::size_t>(i) + 1] = eval(vertex);
  }

  std::vector<std::size_t> order(simplex.size());
  while (evals < max_evals) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    const std::size_t lo_i = order.front();
    const std::size_t hi_i = order.back();
    const std::size_t next_hi_i = order[order.size() - 2];

    if (std::abs(values[hi_i] - values[lo_i]) <=
        1e-9 * (1.0 + std::abs(values[lo_i]))) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != hi_i) centroid += simplex[i];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[hi_i]);
    const double reflected_value = eval(reflected);
    if (reflected_value < values[lo_i]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[hi_i]);
      const double expanded_value = eval(expanded);
      if (expanded_value < reflected_value) {
        simplex[hi_i] = expanded;
        values[hi_i] = expanded_value;
      } else {
        simplex[hi_i] = reflected;
        values[hi_i] = reflected_value;
      }
    } else if (reflected_value < values[next_hi_i]) {
      simplex[hi_i] = reflected;
      values[hi_i] = reflected_value;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (simplex[hi_i] - centroid);
      const double contracted_value = eval(contracted);
      if (contracted_value < values[hi_i]) {
        simplex[hi_i] = contracted;
        values[hi_i] = contracted_value;
      } else {
        for (std::size_t i = 0; i < simplex.size(); ++i) {
          if (i == lo_i) continue;
          simplex[i] = simplex[lo_i] + 0.5 * (simplex[i] - simplex[lo_i]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  return best_point;
}

}  // namespace

void KernelSpec::validate() const {
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw InvalidDataError("KernelSpec: signal_variance must be positive and finite");
  }
  if (lengthscales.size() == 0 || !(lengthscales.array() > 0.0).all() ||
      !lengthscales.allFinite()) {
    throw InvalidDataError("KernelSpec: all lengthscales must be positive and finite");
  }
  if (noise_variance < 0.0 || !std::isfinite(noise_variance)) {
    throw InvalidDataError("KernelSpec: noise_variance must be non-negative and finite");
  }
}

double KernelSpec::value(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const Eigen::ArrayXd scaled = (a - b).array() / lengthscales.array();
  return signal_variance * std::exp(-0.5 * scaled.square().sum());
}

Eigen::VectorXd KernelSpec::grad_a(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const double k = value(a, b);
  return -k * ((a - b).array() / lengthscales.array().square()).matrix();
}

Eigen::MatrixXd KernelSpec::cross_hessian(const Eigen::VectorXd& a,
                                          const Eigen::VectorXd& b) const {
  const double k = value(a, b);
  const Eigen::VectorXd scaled_delta =
      ((a - b).array() / lengthscales.array().square()).matrix();
  Eigen::MatrixXd hess = -k * scaled_delta * scaled_delta.transpose();
  hess.diagonal() += (k / lengthscales.array().square()).matrix();
  return hess;
}

GpModel::GpModel(KernelSpec kernel, Eigen::MatrixXd inputs, Eigen::VectorXd targets)
    : kernel_(std::move(kernel)),
      train_inputs_(std::move(inputs)),
      train_targets_(std::move(targets)) {
  kernel_.validate();
  if (train_inputs_.rows() == 0) {
    throw InvalidDataError("GpModel: empty training set");
  }
  if (train_inputs_.rows() != train_targets_.size()) {
    throw InvalidDataError("GpModel: inputs/targets row mismatch");
  }
  if (kernel_.lengthscales.size() != train_inputs_.cols()) {
    throw InvalidDataError("GpModel: lengthscale count must equal input dimension");
  }
  if (!train_inputs_.allFinite() || !train_targets_.allFinite()) {
    throw InvalidDataError("GpModel: non-finite training data");
  }

  const Eigen::MatrixXd gram = kernel_matrix(kernel_, train_inputs_);
  const auto factor = factorize(gram, kernel_.noise_variance, kernel_.signal_variance);
  if (!factor) {
    throw NumericError("GpModel: training covariance not factorisable after jitter escalation");
  }
  chol_factor_ = factor->chol;
  jitter_ = factor->jitter;
  alpha_ = chol_factor_.triangularView<Eigen::Lower>().solve(train_targets_);
  alpha_ = chol_factor_.transpose().triangularView<Eigen::Upper>().solve(alpha_);
  log_marginal_likelihood_ = log_marginal(chol_factor_, alpha_, train_targets_);
}

GpModel::Prediction GpModel::posterior(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim() || !x.allFinite()) {
    throw InvalidDataError("GpModel::posterior: bad query point");
  }
  const int n = num_train();
  Eigen::VectorXd k_star(n);
  for (int j = 0; j < n; ++j) {
    k_star[j] = kernel_.value(x, train_inputs_.row(j).transpose());
  }
  Prediction out;
  out.mean = k_star.dot(alpha_);
  const Eigen::VectorXd v = chol_factor_.triangularView<Eigen::Lower>().solve(k_star);
  double raw = kernel_.signal_variance - v.squaredNorm();
  if (raw < 0.0) {
    if (raw < kVarianceClipFloor) {
      throw NumericError("GpModel::posterior: variance " + std::to_string(raw) +
                         " below clip floor");
    }
    raw = 0.0;
  }
  out.variance = raw;
  return out;
}

GradientPosterior GpModel::gradient_posterior(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim() || !x.allFinite()) {
    throw InvalidDataError("GpModel::gradient_posterior: bad query point");
  }
  const int n = num_train();
  const int dim = input_dim();

  Eigen::MatrixXd grad_k(dim, n);  // column j = d/dx k(x, x_j)
  for (int j = 0; j < n; ++j) {
    grad_k.col(j) = kernel_.grad_a(x, train_inputs_.row(j).transpose());
  }

  GradientPosterior post;
  post.mean = grad_k * alpha_;

  const Eigen::MatrixXd w = chol_factor_.triangularView<Eigen::Lower>().solve(grad_k.transpose());
  Eigen::MatrixXd cov = kernel_.cross_hessian(x, x) - w.transpose() * w;
  cov = 0.5 * (cov + cov.transpose()).eval();
  post.covariance = cov;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) {
    throw NumericError("GpModel::gradient_posterior: eigendecomposition failed");
  }
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < kGradEigFloor) {
    throw NumericError("GpModel::gradient_posterior: covariance eigenvalue " +
                       std::to_string(lambda.minCoeff()) + " below PSD floor");
  }
  lambda = lambda.cwiseMax(0.0).cwiseSqrt();
  post.sample_factor =
      eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  return post;
}

HyperBounds HyperBounds::auto_for(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  const int dim = static_cast<int>(inputs.cols());
  const double n = static_cast<double>(targets.size());
  const double mean = targets.mean();
  double var = (targets.array() - mean).square().sum() / std::max(1.0, n - 1.0);
  var = std::max(var, 1e-12 * (1.0 + mean * mean));

  HyperBounds bounds;
  bounds.lengthscale_lo.resize(dim);
  bounds.lengthscale_hi.resize(dim);
  for (int i = 0; i < dim; ++i) {
    double range = inputs.col(i).maxCoeff() - inputs.col(i).minCoeff();
    if (range <= 0.0) range = 1.0;
    bounds.lengthscale_lo[i] = 1e-2 * range;
    bounds.lengthscale_hi[i] = 10.0 * range;
  }
  bounds.signal_lo = 1e-4 * var;
  bounds.signal_hi = 1e2 * var;
  bounds.noise_lo = 1e-6 * var;
  bounds.noise_hi = var;
  return bounds;
}

GpModel GpModel::fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  return fit(inputs, targets, HyperBounds::auto_for(inputs, targets));
}

GpModel GpModel::fit(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const HyperBounds& bounds, const KernelSpec* warm_start) {
  if (inputs.rows() < 2) {
    throw InvalidDataError("GpModel::fit: need at least 2 observations");
  }
  if (!inputs.allFinite() || !targets.allFinite()) {
    throw InvalidDataError("GpModel::fit: non-finite training data");
  }
  if (inputs.rows() != targets.size()) {
    throw InvalidDataError("GpModel::fit: inputs/targets row mismatch");
  }
  const int dim = static_cast<int>(inputs.cols());
  if (bounds.lengthscale_lo.size() != dim || bounds.lengthscale_hi.size() != dim ||
      !(bounds.signal_lo > 0.0) || !(bounds.noise_lo >= 0.0)) {
    throw InvalidDataError("GpModel::fit: malformed hyperparameter bounds");
  }

  // Log-space search box: [log lengthscales..., log signal, log noise].
  const int param_dim = dim + 2;
  Eigen::VectorXd lo(param_dim), hi(param_dim);
  for (int i = 0; i < dim; ++i) {
    lo[i] = std::log(bounds.lengthscale_lo[i]);
    hi[i] = std::log(bounds.lengthscale_hi[i]);
  }
  lo[dim] = std::log(bounds.signal_lo);
  hi[dim] = std::log(bounds.signal_hi);
  lo[dim + 1] = std::log(std::max(bounds.noise_lo, 1e-300));
  hi[dim + 1] = std::log(bounds.noise_hi);

  const auto kernel_at = [&](const Eigen::VectorXd& theta) {
    KernelSpec kernel;
    kernel.lengthscales = theta.head(dim).array().exp().matrix();
    kernel.signal_variance = std::exp(theta[dim]);
    kernel.noise_variance = std::exp(theta[dim + 1]);
    return kernel;
  };

  const auto negative_lml = [&](const Eigen::VectorXd& theta) {
    const KernelSpec kernel = kernel_at(theta);
    const Eigen::MatrixXd gram = kernel_matrix(kernel, inputs);
    const auto factor = factorize(gram, kernel.noise_variance, kernel.signal_variance);
    if (!factor) return 1e300;
    Eigen::VectorXd alpha = factor->chol.triangularView<Eigen::Lower>().solve(targets);
    alpha = factor->chol.transpose().triangularView<Eigen::Upper>().solve(alpha);
    return -log_marginal(factor->chol, alpha, targets);
  };

  constexpr int kRestarts = 5;
  Rng restart_rng(0x5EEDULL);

  Eigen::VectorXd best_theta;
  double best_value = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < kRestarts; ++restart) {
    Eigen::VectorXd start(param_dim);
    if (restart == 0) {
      if (warm_start != nullptr) {
        for (int i = 0; i < dim; ++i) start[i] = std::log(warm_start->lengthscales[i]);
        start[dim] = std::log(warm_start->signal_variance);
        start[dim + 1] = std::log(std::max(warm_start->noise_variance, 1e-300));
      } else {
        // Heuristic: ~0.3-range lengthscales, data-variance signal,
        // small noise.
        for (int i = 0; i < dim; ++i) start[i] = lo[i] + 0.5 * (hi[i] - lo[i]);
        start[dim] = lo[dim] + 0.67 * (hi[dim] - lo[dim]);
        start[dim + 1] = lo[dim + 1] + 0.33 * (hi[dim + 1] - lo[dim + 1]);
      }
    } else {
      for (int i = 0; i < param_dim; ++i) {
        start[i] = restart_rng.uniform(lo[i], hi[i]);
      }
    }
    const Eigen::VectorXd theta = nelder_mead(negative_lml, start, lo, hi, 60 * param_dim);
    const double value = negative_lml(theta);
    if (value < best_value) {
      best_value = value;
      best_theta = theta;
    }
  }
  if (!std::isfinite(best_value) || best_value >= 1e300) {
    throw NumericError("GpModel::fit: no factorisable hyperparameters found in bounds");
  }
  return GpModel(kernel_at(best_theta), inputs, targets);
}

Eigen::VectorXd sample_gradient(const GradientPosterior& posterior, Rng& rng) {
  const Eigen::Index dim = posterior.mean.size();
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.normal();
  return posterior.mean + posterior.sample_factor * z;
}

}  // namespace mobopc
