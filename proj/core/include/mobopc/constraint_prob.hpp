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

#ifndef MOBOPC_CONSTRAINT_PROB_HPP
#define MOBOPC_CONSTRAINT_PROB_HPP

#include <Eigen/Core>
#include <span>
#include <vector>

#include "mobopc/cone.hpp"
#include "mobopc/gp.hpp"
#include "mobopc/rng.hpp"

namespace mobopc {

inline constexpr int kDefaultProbRounds = 1000;

/// Monte-Carlo estimate of a constraint-satisfaction probability.
struct ProbEstimate {
  double value = 0.0;   // hits / num_samples
  int num_samples = 0;  // R
  double std_error = 0.0;
};

/// Estimates the posterior probability that the design point x satisfies
/// every preference constraint in `bases`, by sampling one gradient vector
/// per objective from its derivative posterior in each of `num_rounds`
/// rounds and running the cone test on the per-design-axis vectors.
///
/// Round k uses the substream rng.split(k), so the estimate is reproducible
/// for a given rng regardless of evaluation order, and adding a basis can
/// only shrink the hit count (same samples, stricter test).
ProbEstimate prob_satisfies(std::span<const GpModel> models, std::span<const ConeBasis> bases,
                            const Eigen::VectorXd& x, int num_rounds, Rng rng);

/// Same, but with the gradient posteriors precomputed by the caller
/// (posteriors[i] must belong to objective i at the same x).
ProbEstimate prob_satisfies(std::span<const GradientPosterior> posteriors,
                            std::span<const ConeBasis> bases, int num_rounds, Rng rng);

}  // namespace mobopc

#endif  // MOBOPC_CONSTRAINT_PROB_HPP
