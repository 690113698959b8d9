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

// Test-only reference implementations. Each one deliberately avoids the
// algorithmic shortcuts of the library path it checks: dense inverses
// instead of cached Cholesky solves, inclusion-exclusion instead of cell
// grids, feasibility grids instead of sign tests, quadrature instead of
// Monte-Carlo.

#ifndef MOBOPC_TESTS_ORACLES_HPP
#define MOBOPC_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "mobopc/cone.hpp"
#include "mobopc/gp.hpp"
#include "mobopc/rng.hpp"

namespace mobopc::oracle {

/// Posterior mean/variance from the textbook formula with a dense matrix
/// inverse (no Cholesky, no caching, no clipping).
std::pair<double, double> dense_gp_posterior(const KernelSpec& kernel, const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y, const Eigen::VectorXd& x);

/// Central finite differences of a scalar function.
Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                                     const Eigen::VectorXd& x, double step);

/// Brute-force membership test for the perpendicular set: discretises the
/// cone as all nonnegative integer combinations (c / divisions summing to 1)
/// of the extreme directions, normalises each, and declares v a member iff
/// min over the grid of |s_hat . v_hat| is at most tol.
class ConeGridOracle {
 public:
  ConeGridOracle(const ConeBasis& basis, int divisions);

  bool contains(const Eigen::VectorXd& v, double tol) const;
  std::size_t size() const { return static_cast<std::size_t>(directions_.rows()); }

 private:
  Eigen::MatrixXd directions_;  // rows are unit cone members
};

/// Dominated hypervolume by inclusion-exclusion over all nonempty subsets
/// (exact for small point sets; maximisation convention).
double hv_inclusion_exclusion(const std::vector<Eigen::VectorXd>& points,
                              const Eigen::VectorXd& reference);

/// Expected hypervolume of the valid subset by exhaustive enumeration of all
/// 2^N validity outcomes, each point independently valid with its prob.
double weighted_hv_enumeration(const std::vector<Eigen::VectorXd>& points,
                               const std::vector<double>& probs,
                               const Eigen::VectorXd& reference);

/// Expected hypervolume improvement for a 2-objective Gaussian belief, by
/// dense midpoint quadrature over [mean - 6 sd, mean + 6 sd]^2.
double ehi_quadrature(const Eigen::Vector2d& mean, const Eigen::Vector2d& stddev,
                      const std::vector<Eigen::VectorXd>& archive,
                      const Eigen::VectorXd& reference, int grid_points);

/// Uniform random unit vector.
Eigen::VectorXd random_unit_vector(int dim, Rng& rng);

}  // namespace mobopc::oracle

#endif  // MOBOPC_TESTS_ORACLES_HPP
