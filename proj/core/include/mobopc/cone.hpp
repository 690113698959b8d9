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

#ifndef MOBOPC_CONE_HPP
#define MOBOPC_CONE_HPP

#include <Eigen/Core>
#include <vector>

namespace mobopc {

/// An ordered chain of objective indices declaring "objective indices[0] is
/// to be more stable than indices[1], which is more stable than indices[2],
/// ...". At least two indices are required (one pairwise preference); all
/// indices must be distinct and in [0, num_objectives).
struct PreferenceTuple {
  std::vector<int> indices;
  int num_objectives = 0;

  PreferenceTuple(std::vector<int> indices_in, int num_objectives_in);

  /// Number of pairwise preferences (indices.size() - 1).
  int chain_length() const { return static_cast<int>(indices.size()) - 1; }
};

/// Both representations of the admissible-weight cone for a preference
/// tuple: half-space normals (polyhedral form) and extreme directions
/// (generative form). Column i of each matrix is the i-th vector.
///
/// Bases are constructed for the canonical tuple (0, 1, ..., Q) and then the
/// objective axes are permuted into the user's index order; `permutation[k]`
/// is the objective axis that canonical axis k maps to.
struct ConeBasis {
  Eigen::MatrixXd polyhedral_normals;   // m x m
  Eigen::MatrixXd extreme_directions;   // m x m
  std::vector<int> permutation;
  int chain_length = 0;                 // Q

  int num_objectives() const { return static_cast<int>(polyhedral_normals.rows()); }
};

/// Builds the half-space normals and extreme directions of the weight cone
/// for `tuple`, permuted to the tuple's objective order.
ConeBasis build_basis(const PreferenceTuple& tuple);

/// Sign tolerance used when none is given explicitly: 1e-9 * ||v||_2.
double default_sign_tol(const Eigen::VectorXd& v);

/// Membership test for the set of vectors annihilated by some weight vector
/// in the cone: true iff v is (numerically) zero, or the projections of v
/// onto the extreme directions do not all share one strict sign. Projections
/// with magnitude <= tol count as sign zero.
bool in_s_perp(const ConeBasis& basis, const Eigen::VectorXd& v, double tol);
bool in_s_perp(const ConeBasis& basis, const Eigen::VectorXd& v);

/// Tests a full gradient matrix (rows = design axes, columns = objectives):
/// true iff every row passes in_s_perp. The tol overload applies one fixed
/// tolerance to all rows; the default overload uses default_sign_tol per row.
bool satisfies_preference(const Eigen::MatrixXd& gradients, const ConeBasis& basis, double tol);
bool satisfies_preference(const Eigen::MatrixXd& gradients, const ConeBasis& basis);

/// Conjunction over several bases (used for composite constraints).
bool satisfies_all_preferences(const Eigen::MatrixXd& gradients,
                               const std::vector<ConeBasis>& bases);

}  // namespace mobopc

#endif  // MOBOPC_CONE_HPP
