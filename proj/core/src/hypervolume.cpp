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

#include "mobopc/hypervolume.hpp"

#include <algorithm>
#include <cstddef>

#include "mobopc/errors.hpp"

namespace mobopc {

bool dominates_or_equal(const Eigen::VectorXd& y, const Eigen::VectorXd& y2) {
  return (y.array() >= y2.array()).all();
}

bool dominates(const Eigen::VectorXd& y, const Eigen::VectorXd& y2) {
  return y != y2 && dominates_or_equal(y, y2);
}

std::vector<int> dominant_indices(const std::vector<Eigen::VectorXd>& points) {
  std::vector<int> result;
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    bool keep = true;
    for (int j = 0; j < n && keep; ++j) {
      if (j == i) continue;
      if (dominates(points[j], points[i])) keep = false;
      // Duplicates collapse to the first occurrence.
      if (j < i && points[j] == points[i]) keep = false;
    }
    if (keep) result.push_back(i);
  }
  return result;
}

std::vector<Eigen::VectorXd> dominant_subset(const std::vector<Eigen::VectorXd>& points) {
  std::vector<Eigen::VectorXd> result;
  for (int idx : dominant_indices(points)) result.push_back(points[idx]);
  return result;
}

CellGrid::CellGrid(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference) {
  const int m = static_cast<int>(reference.size());
  for (const auto& y : points) {
    if (y.size() != m) throw InvalidDataError("CellGrid: point dimension mismatch");
    if ((y.array() > reference.array()).all()) {
      kept_.push_back(y);
    } else {
      ++dropped_;
    }
  }
  axis_coords_.resize(static_cast<std::size_t>(m));
  for (int axis = 0; axis < m; ++axis) {
    auto& coords = axis_coords_[static_cast<std::size_t>(axis)];
    coords.push_back(reference[axis]);
    for (const auto& y : kept_) coords.push_back(y[axis]);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  }
}

std::size_t CellGrid::num_cells() const {
  if (kept_.empty()) return 0;
  std::size_t count = 1;
  for (const auto& coords : axis_coords_) count *= coords.size() - 1;
  return count;
}

void CellGrid::for_each_cell(const std::function<void(const Cell&)>& fn) const {
  if (empty()) return;
  const int m = num_axes();
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  Cell cell;
  cell.lower.resize(m);
  cell.upper.resize(m);
  while (true) {
    cell.volume = 1.0;
    for (int axis = 0; axis < m; ++axis) {
      const auto& coords = axis_coords_[static_cast<std::size_t>(axis)];
      const std::size_t k = idx[static_cast<std::size_t>(axis)];
      cell.lower[axis] = coords[k];
      cell.upper[axis] = coords[k + 1];
      cell.volume *= coords[k + 1] - coords[k];
    }
    fn(cell);
    int axis = m - 1;
    for (; axis >= 0; --axis) {
      auto& k = idx[static_cast<std::size_t>(axis)];
      if (++k < axis_coords_[static_cast<std::size_t>(axis)].size() - 1) break;
      k = 0;
    }
    if (axis < 0) break;
  }
}

double CellGrid::total_volume() const {
  double total = 0.0;
  for_each_cell([&](const Cell& cell) { total += cell.volume; });
  return total;
}

CellGrid build_cells(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference) {
  return CellGrid(points, reference);
}

double hypervolume(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& reference) {
  const CellGrid grid(points, reference);
  const auto& kept = grid.kept_points();
  double volume = 0.0;
  grid.for_each_cell([&](const CellGrid::Cell& cell) {
    for (const auto& y : kept) {
      if (dominates_or_equal(y, cell.upper)) {
        volume += cell.volume;
        return;
      }
    }
  });
  return volume;
}

double weighted_expected_hv(const ParetoArchive& archive) {
  std::vector<Eigen::VectorXd> ys;
  ys.reserve(archive.points.size());
  for (const auto& p : archive.points) {
    if (!p.prob.has_value()) {
      throw ContractError("weighted_expected_hv: every point needs a probability");
    }
    if (*p.prob < 0.0 || *p.prob > 1.0) {
      throw InvalidDataError("weighted_expected_hv: probability outside [0, 1]");
    }
    ys.push_back(p.y);
  }
  const CellGrid grid(ys, archive.reference);
  double total = 0.0;
  grid.for_each_cell([&](const CellGrid::Cell& cell) {
    double miss_all = 1.0;
    for (const auto& p : archive.points) {
      if ((p.y.array() > archive.reference.array()).all() &&
          dominates_or_equal(p.y, cell.upper)) {
        miss_all *= 1.0 - *p.prob;
      }
    }
    total += cell.volume * (1.0 - miss_all);
  });
  return total;
}

}  // namespace mobopc
