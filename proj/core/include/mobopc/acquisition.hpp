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

#ifndef MOBOPC_ACQUISITION_HPP
#define MOBOPC_ACQUISITION_HPP

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mobopc/cone.hpp"
#include "mobopc/constraint_prob.hpp"
#include "mobopc/gp.hpp"
#include "mobopc/hypervolume.hpp"
#include "mobopc/rng.hpp"

namespace mobopc {

inline constexpr int kDefaultAcquisitionRounds = 500;

/// Axis-aligned design-space box.
struct DesignBox {
  Eigen::VectorXd lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

/// Everything an acquisition evaluation needs besides the query point. The
/// archive must carry cached constraint probabilities when pehi is used
/// (they are recomputed once per outer iteration, not per evaluation).
/// `sx_override`, when set, replaces the Monte-Carlo estimate of the query
/// point's own constraint probability; tests use it to pin probabilities.
struct AcquisitionContext {
  std::span<const GpModel> models;
  ParetoArchive archive;
  std::vector<ConeBasis> bases;
  int mc_rounds = kDefaultAcquisitionRounds;  // objective-sample rounds
  int prob_rounds = kDefaultProbRounds;       // gradient-sample rounds
  std::optional<double> sx_override;
};

namespace detail {

/// Per-context precomputation for hypervolume-improvement rounds: the base
/// cell grid of the archive and, for every grid corner, the probability that
/// no valid archive point covers it (product of (1 - prob) over covering
/// points). With all probabilities forced to 1 the table degenerates to the
/// plain uncovered-cell indicator, which turns the preference-weighted
/// improvement into ordinary expected hypervolume improvement.
class ImprovementModel {
 public:
  ImprovementModel(const ParetoArchive& archive, bool use_probs);

  /// One Monte-Carlo round: total volume of the cells of the refined grid
  /// (archive coordinates plus y) dominated by y, each weighted by the
  /// probability that no valid archive point already covers it.
  double improvement_below(const Eigen::VectorXd& y) const;

  const Eigen::VectorXd& reference() const { return reference_; }

 private:
  Eigen::VectorXd reference_;
  std::vector<std::vector<double>> levels_;  // per axis, ascending, > z_i
  std::vector<std::size_t> strides_;
  std::vector<double> corner_weight_;
};

}  // namespace detail

/// Expected hypervolume improvement at x, estimated with ctx.mc_rounds
/// Monte-Carlo samples of the objective posterior. Deterministic given rng.
double ehi(const AcquisitionContext& ctx, const Eigen::VectorXd& x, Rng rng);

/// Preference-weighted expected hypervolume improvement at x: the improvement
/// rounds are weighted per cell by the archive probabilities and the whole
/// estimate scales with the query point's own constraint probability s_x.
double pehi(const AcquisitionContext& ctx, const Eigen::VectorXd& x, Rng rng);

enum class AcquisitionKind { kEhi, kPehi };

/// Budget for the inner maximiser: Latin-hypercube screening followed by
/// pattern-search refinement of the best screened candidates.
struct SearchBudget {
  int screen_count = 200;
  int local_restarts = 3;
  int refine_evals = 50;
};

/// Latin-hypercube sample of `count` points in `box` (rows are points).
Eigen::MatrixXd latin_hypercube(int count, const DesignBox& box, Rng rng);

/// Maximises an arbitrary function over the box with the screening +
/// refinement scheme. Deterministic given rng.
std::pair<Eigen::VectorXd, double> maximize_function(
    const std::function<double(const Eigen::VectorXd&)>& fn, const DesignBox& box,
    const SearchBudget& budget, Rng rng);

/// Maximises ehi or pehi over the box. All acquisition evaluations share one
/// rng substream (common random numbers), so candidate comparisons are not
/// washed out by Monte-Carlo noise.
std::pair<Eigen::VectorXd, double> maximize_acquisition(const AcquisitionContext& ctx,
                                                        AcquisitionKind kind,
                                                        const DesignBox& box,
                                                        const SearchBudget& budget, Rng rng);

}  // namespace mobopc

#endif  // MOBOPC_ACQUISITION_HPP
