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

#include "mobopc/cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mobopc/errors.hpp"

namespace mobopc {

PreferenceTuple::PreferenceTuple(std::vector<int> indices_in, int num_objectives_in)
    : indices(std::move(indices_in)), num_objectives(num_objectives_in) {
  if (num_objectives < 2) {
    throw InvalidDataError("PreferenceTuple: need at least 2 objectives, got " +
                           std::to_string(num_objectives));
  }
  if (indices.size() < 2) {
    throw InvalidDataError("PreferenceTuple: need at least one pairwise preference (2 indices)");
  }
  if (indices.size() > static_cast<std::size_t>(num_objectives)) {
    throw InvalidDataError("PreferenceTuple: more indices than objectives");
  }
  std::vector<bool> seen(static_cast<std::size_t>(num_objectives), false);
  for (int idx : indices) {
    if (idx < 0 || idx >= num_objectives) {
      throw InvalidDataError("PreferenceTuple: index " + std::to_string(idx) +
                             " outside [0, " + std::to_string(num_objectives) + ")");
    }
    if (seen[static_cast<std::size_t>(idx)]) {
      throw InvalidDataError("PreferenceTuple: duplicate index " + std::to_string(idx));
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
}

ConeBasis build_basis(const PreferenceTuple& tuple) {
  const int m = tuple.num_objectives;
  const int q = tuple.chain_length();

  // Canonical axis k -> user objective index. The first Q+1 canonical axes
  // follow the tuple; the remaining axes take the unused objective indices
  // in increasing order.
  std::vector<int> perm(tuple.indices.begin(), tuple.indices.end());
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int idx : perm) used[static_cast<std::size_t>(idx)] = true;
  for (int i = 0; i < m; ++i) {
    if (!used[static_cast<std::size_t>(i)]) perm.push_back(i);
  }

  ConeBasis basis;
  basis.polyhedral_normals = Eigen::MatrixXd::Zero(m, m);
  basis.extreme_directions = Eigen::MatrixXd::Zero(m, m);
  basis.permutation = perm;
  basis.chain_length = q;

  // Canonical construction; row k of each vector lands on objective axis
  // perm[k].
  for (int i = 0; i < m; ++i) {
    if (i < q) {
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      basis.polyhedral_normals(perm[i], i) = inv_sqrt2;
      basis.polyhedral_normals(perm[i + 1], i) = -inv_sqrt2;
    } else {
      basis.polyhedral_normals(perm[i], i) = 1.0;
    }
    if (i <= q) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(i + 1));
      for (int l = 0; l <= i; ++l) basis.extreme_directions(perm[l], i) = scale;
    } else {
      basis.extreme_directions(perm[i], i) = 1.0;
    }
  }
  return basis;
}

double default_sign_tol(const Eigen::VectorXd& v) { return 1e-9 * v.norm(); }

bool in_s_perp(const ConeBasis& basis, const Eigen::VectorXd& v, double tol) {
  if (v.size() != basis.num_objectives()) {
    throw InvalidDataError("in_s_perp: vector dimension does not match basis");
  }
  if (!v.allFinite()) {
    throw InvalidDataError("in_s_perp: non-finite test vector");
  }
  if (v.lpNorm<Eigen::Infinity>() <= tol) return true;

  const Eigen::VectorXd b = basis.extreme_directions.transpose() * v;
  int first_sign = 0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    const int sign = std::abs(b[j]) <= tol ? 0 : (b[j] > 0.0 ? 1 : -1);
    if (j == 0) {
      first_sign = sign;
    } else if (sign != first_sign) {
      return true;
    }
  }
  return false;
}

bool in_s_perp(const ConeBasis& basis, const Eigen::VectorXd& v) {
  return in_s_perp(basis, v, default_sign_tol(v));
}

bool satisfies_preference(const Eigen::MatrixXd& gradients, const ConeBasis& basis, double tol) {
  if (gradients.cols() != basis.num_objectives()) {
    throw InvalidDataError("satisfies_preference: gradient columns must equal num objectives");
  }
  for (Eigen::Index j = 0; j < gradients.rows(); ++j) {
    if (!in_s_perp(basis, gradients.row(j).transpose(), tol)) return false;
  }
  return true;
}

bool satisfies_preference(const Eigen::MatrixXd& gradients, const ConeBasis& basis) {
  if (gradients.cols() != basis.num_objectives()) {
    throw InvalidDataError("satisfies_preference: gradient columns must equal num objectives");
  }
  for (Eigen::Index j = 0; j < gradients.rows(); ++j) {
    const Eigen::VectorXd row = gradients.row(j).transpose();
    if (!in_s_perp(basis, row, default_sign_tol(row))) return false;
  }
  return true;
}

bool satisfies_all_preferences(const Eigen::MatrixXd& gradients,
                               const std::vector<ConeBasis>& bases) {
  if (bases.empty()) {
    throw ContractError("satisfies_all_preferences: at least one basis required");
  }
  return std::all_of(bases.begin(), bases.end(), [&](const ConeBasis& basis) {
    return satisfies_preference(gradients, basis);
  });
}

}  // namespace mobopc
