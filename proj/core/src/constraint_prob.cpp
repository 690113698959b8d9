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

#include "mobopc/constraint_prob.hpp"

#include <cmath>
#include <string>

#include "mobopc/errors.hpp"

namespace mobopc {

ProbEstimate prob_satisfies(std::span<const GradientPosterior> posteriors,
                            std::span<const ConeBasis> bases, int num_rounds, Rng rng) {
  if (bases.empty()) {
    throw ContractError("prob_satisfies: at least one preference basis required");
  }
  if (posteriors.empty()) {
    throw ContractError("prob_satisfies: at least one objective model required");
  }
  if (num_rounds < 1) {
    throw ContractError("prob_satisfies: num_rounds must be >= 1");
  }
  const int num_objectives = static_cast<int>(posteriors.size());
  const int design_dim = static_cast<int>(posteriors[0].mean.size());
  for (const auto& basis : bases) {
    if (basis.num_objectives() != num_objectives) {
      throw InvalidDataError("prob_satisfies: basis dimension " +
                             std::to_string(basis.num_objectives()) + " != objective count " +
                             std::to_string(num_objectives));
    }
  }

  // gradients(j, i) = sampled d f_i / d x_j; row j is the per-axis vector
  // fed to the cone test.
  Eigen::MatrixXd gradients(design_dim, num_objectives);
  int hits = 0;
  for (int round = 0; round < num_rounds; ++round) {
    Rng round_rng = rng.split(static_cast<std::uint64_t>(round));
    for (int i = 0; i < num_objectives; ++i) {
      gradients.col(i) = sample_gradient(posteriors[static_cast<std::size_t>(i)], round_rng);
    }
    bool ok = true;
    for (const auto& basis : bases) {
      if (!satisfies_preference(gradients, basis)) {
        ok = false;
        break;
      }
    }
    if (ok) ++hits;
  }

  ProbEstimate estimate;
  estimate.num_samples = num_rounds;
  estimate.value = static_cast<double>(hits) / static_cast<double>(num_rounds);
  estimate.std_error =
      std::sqrt(estimate.value * (1.0 - estimate.value) / static_cast<double>(num_rounds));
  return estimate;
}

ProbEstimate prob_satisfies(std::span<const GpModel> models, std::span<const ConeBasis> bases,
                            const Eigen::VectorXd& x, int num_rounds, Rng rng) {
  std::vector<GradientPosterior> posteriors;
  posteriors.reserve(models.size());
  for (const auto& model : models) {
    posteriors.push_back(model.gradient_posterior(x));
  }
  return prob_satisfies(std::span<const GradientPosterior>(posteriors), bases, num_rounds, rng);
}

}  // namespace mobopc
