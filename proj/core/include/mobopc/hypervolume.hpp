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

#ifndef MOBOPC_HYPERVOLUME_HPP
#define MOBOPC_HYPERVOLUME_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

namespace mobopc {

// Maximisation convention throughout: larger objective values are better.

/// y dominates y2: y != y2 and y_i >= y2_i for all i.
bool dominates(const Eigen::VectorXd& y, const Eigen::VectorXd& y2);

/// y dominates-or-equals y2: y_i >= y2_i for all i.
bool dominates_or_equal(const Eigen::VectorXd& y, const Eigen::VectorXd& y2);

/// Non-dominated subset of `points`; duplicates collapse to one copy.
/// Preserves first-seen order.
std::vector<Eigen::VectorXd> dominant_subset(const std::vector<Eigen::VectorXd>& points);

/// Indices into `points` of the non-dominated subset (duplicates collapsed,
/// keeping the first occurrence).
std::vector<int> dominant_indices(const std::vector<Eigen::VectorXd>& points);

/// One evaluated design point with its objective vector and, when the run
/// uses preference constraints, the cached posterior probability that it
/// satisfies them.
struct ArchivePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  std::optional<double> prob;
};

/// Observation archive plus the hypervolume reference point.
struct ParetoArchive {
  std::vector<ArchivePoint> points;
  Eigen::VectorXd reference;
};

/// Axis-sorted cell grid over the box [z, componentwise max(y)]. Each axis
/// is cut at z_i and at every distinct kept y-coordinate; points that do not
/// strictly dominate z are dropped (counted, not an error).
class CellGrid {
 public:
  CellGrid(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference);

  struct Cell {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;  // the dominant corner
    double volume = 0.0;
  };

  int num_axes() const { return static_cast<int>(axis_coords_.size()); }
  std::size_t num_cells() const;
  bool empty() const { return num_cells() == 0; }

  /// Sorted cut coordinates along one axis (first entry is z_i).
  const std::vector<double>& axis_coords(int axis) const { return axis_coords_[axis]; }

  /// Number of points dropped for not strictly dominating the reference.
  int dropped_count() const { return dropped_; }

  /// The points kept after reference filtering.
  const std::vector<Eigen::VectorXd>& kept_points() const { return kept_; }

  /// Visits every cell in lexicographic order of its multi-index.
  void for_each_cell(const std::function<void(const Cell&)>& fn) const;

  /// Sum of all cell volumes (the volume of the tiled box).
  double total_volume() const;

 private:
  std::vector<std::vector<double>> axis_coords_;
  std::vector<Eigen::VectorXd> kept_;
  int dropped_ = 0;
};

CellGrid build_cells(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference);

/// Dominated hypervolume above `reference` (S-metric): total volume of grid
/// cells whose dominant corner is dominated-or-equalled by some point.
double hypervolume(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference);

/// Expectation of the hypervolume dominated by the *valid* subset of the
/// archive, where each point is independently valid with its cached
/// probability: sum over cells of vol * (1 - prod over covering points of
/// (1 - prob)). Throws ContractError if any point lacks a probability.
double weighted_expected_hv(const ParetoArchive& archive);

}  // namespace mobopc

#endif  // MOBOPC_HYPERVOLUME_HPP
