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

#include "mobopc/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mobopc/errors.hpp"

namespace mobopc {

namespace detail {

ImprovementModel::ImprovementModel(const ParetoArchive& archive, bool use_probs)
    : reference_(archive.reference) {
  const int m = static_cast<int>(reference_.size());

  std::vector<const ArchivePoint*> kept;
  for (const auto& point : archive.points) {
    if (point.y.size() != m) {
      throw InvalidDataError("ImprovementModel: objective dimension mismatch");
    }
    if ((point.y.array() > reference_.array()).all()) {
      if (use_probs) {
        if (!point.prob.has_value()) {
          throw ContractError("pehi: archive point lacks a cached constraint probability");
        }
        if (*point.prob < 0.0 || *point.prob > 1.0) {
          throw InvalidDataError("pehi: archive probability outside [0, 1]");
        }
      }
      kept.push_back(&point);
    }
  }

  levels_.resize(static_cast<std::size_t>(m));
  std::vector<std::size_t> dims(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& axis = levels_[static_cast<std::size_t>(i)];
    axis.reserve(kept.size());
    for (const auto* point : kept) axis.push_back(point->y[i]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    dims[static_cast<std::size_t>(i)] = axis.size() + 1;  // +1: "beyond max" level
  }

  strides_.assign(static_cast<std::size_t>(m), 1);
  for (int i = m - 2; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i) + 1] * dims[static_cast<std::size_t>(i) + 1];
  }
  const std::size_t table_size = strides_[0] * dims[0];
  corner_weight_.assign(table_size, 1.0);

  // corner_weight_[flat(k)] = prod over kept points covering the corner of
  // (1 - prob). Index k_i == levels_[i].size() means a threshold above every
  // observed value, which no point covers.
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  for (std::size_t flat = 0; flat < table_size; ++flat) {
    double weight = 1.0;
    for (const auto* point : kept) {
      bool covers = true;
      for (int i = 0; i < m && covers; ++i) {
        const auto& axis = levels_[static_cast<std::size_t>(i)];
        const std::size_t k = idx[static_cast<std::size_t>(i)];
        if (k >= axis.size() || point->y[i] < axis[k]) covers = false;
      }
      if (covers) {
        const double prob = use_probs ? point->prob.value() : 1.0;
        weight *= 1.0 - prob;
        if (weight == 0.0) break;
      }
    }
    corner_weight_[flat] = weight;
    for (int i = m - 1; i >= 0; --i) {
      auto& k = idx[static_cast<std::size_t>(i)];
      if (++k < dims[static_cast<std::size_t>(i)]) break;
      k = 0;
    }
  }
}

double ImprovementModel::improvement_below(const Eigen::VectorXd& y) const {
  const int m = static_cast<int>(reference_.size());
  if (y.size() != m) throw InvalidDataError("improvement_below: dimension mismatch");

  // Per axis: the upper coordinates of refined cells inside [z_i, y_i] are
  // levels strictly below y_i followed by y_i itself; the corner-table index
  // of the c-th upper coordinate is c.
  std::vector<std::size_t> cut_count(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> widths(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (!(y[i] > reference_[i])) return 0.0;
    const auto& axis = levels_[static_cast<std::size_t>(i)];
    const auto first_ge =
        std::lower_bound(axis.begin(), axis.end(), y[i]) - axis.begin();
    const std::size_t p = static_cast<std::size_t>(first_ge);
    auto& w = widths[static_cast<std::size_t>(i)];
    w.resize(p + 1);
    double prev = reference_[i];
    for (std::size_t c = 0; c < p; ++c) {
      w[c] = axis[c] - prev;
      prev = axis[c];
    }
    // When y_i coincides with a level the last slab has zero width and its
    // terms vanish, so ties need no special casing.
    w[p] = y[i] - prev;
    cut_count[static_cast<std::size_t>(i)] = p + 1;
  }

  // Sum over the multi-index box of width-products times corner weights.
  double total = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int i = 0; i < m; ++i) {
      w *= widths[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      flat += idx[static_cast<std::size_t>(i)] * strides_[static_cast<std::size_t>(i)];
    }
    total += w * corner_weight_[flat];
    int axis = m - 1;
    for (; axis >= 0; --axis) {
      auto& k = idx[static_cast<std::size_t>(axis)];
      if (++k < cut_count[static_cast<std::size_t>(axis)]) break;
      k = 0;
    }
    if (axis < 0) break;
  }
  return total;
}

namespace {

/// Shared Monte-Carlo loop: mean improvement over mc_rounds posterior
/// samples of the objective vector at x. Round k draws from rng.split(k).
double mc_improvement(std::span<const GpModel> models, const ImprovementModel& improvement,
                      const Eigen::VectorXd& x, int mc_rounds, Rng rng) {
  if (mc_rounds < 1) throw ContractError("acquisition: mc_rounds must be >= 1");
  const int m = static_cast<int>(models.size());
  Eigen::VectorXd mean(m), stddev(m);
  for (int i = 0; i < m; ++i) {
    const auto pred = models[static_cast<std::size_t>(i)].posterior(x);
    mean[i] = pred.mean;
    stddev[i] = std::sqrt(pred.variance);
  }
  double total = 0.0;
  Eigen::VectorXd y(m);
  for (int round = 0; round < mc_rounds; ++round) {
    Rng round_rng = rng.split(static_cast<std::uint64_t>(round));
    for (int i = 0; i < m; ++i) y[i] = mean[i] + stddev[i] * round_rng.normal();
    total += improvement.improvement_below(y);
  }
  return total / static_cast<double>(mc_rounds);
}

constexpr std::uint64_t kObjectiveStream = 0;
constexpr std::uint64_t kProbabilityStream = 1;

double pehi_impl(const AcquisitionContext& ctx, const detail::ImprovementModel& improvement,
                 const Eigen::VectorXd& x, Rng rng) {
  double s_x;
  if (ctx.sx_override.has_value()) {
    s_x = *ctx.sx_override;
  } else {
    if (ctx.bases.empty()) throw ContractError("pehi: at least one preference basis required");
    s_x = prob_satisfies(ctx.models, std::span<const ConeBasis>(ctx.bases), x, ctx.prob_rounds,
                         rng.split(kProbabilityStream))
              .value;
  }
  const double base =
      mc_improvement(ctx.models, improvement, x, ctx.mc_rounds, rng.split(kObjectiveStream));
  return s_x * base;
}

}  // namespace

}  // namespace detail

double ehi(const AcquisitionContext& ctx, const Eigen::VectorXd& x, Rng rng) {
  const detail::ImprovementModel improvement(ctx.archive, /*use_probs=*/false);
  return detail::mc_improvement(ctx.models, improvement, x, ctx.mc_rounds,
                                rng.split(detail::kObjectiveStream));
}

double pehi(const AcquisitionContext& ctx, const Eigen::VectorXd& x, Rng rng) {
  const detail::ImprovementModel improvement(ctx.archive, /*use_probs=*/true);
  return detail::pehi_impl(ctx, improvement, x, rng);
}

Eigen::MatrixXd latin_hypercube(int count, const DesignBox& box, Rng rng) {
  if (count < 1) throw ContractError("latin_hypercube: count must be >= 1");
  const int dim = box.dim();
  Eigen::MatrixXd points(count, dim);
  std::vector<int> perm(static_cast<std::size_t>(count));
  for (int d = 0; d < dim; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = count - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < count; ++i) {
      const double u = (static_cast<double>(perm[static_cast<std::size_t>(i)]) + rng.uniform()) /
                       static_cast<double>(count);
      points(i, d) = box.lo[d] + u * (box.hi[d] - box.lo[d]);
    }
  }
  return points;
}

std::pair<Eigen::VectorXd, double> maximize_function(
    const std::function<double(const Eigen::VectorXd&)>& fn, const DesignBox& box,
    const SearchBudget& budget, Rng rng) {
  if (budget.screen_count < 1) {
    throw ContractError("maximize_function: screening budget must be >= 1");
  }
  const int dim = box.dim();
  const Eigen::MatrixXd candidates = latin_hypercube(budget.screen_count, box, rng.split(10));

  std::vector<double> values(static_cast<std::size_t>(budget.screen_count));
  for (int i = 0; i < budget.screen_count; ++i) {
    values[static_cast<std::size_t>(i)] = fn(candidates.row(i).transpose());
  }
  std::vector<int> order(static_cast<std::size_t>(budget.screen_count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = values[static_cast<std::size_t>(a)];
    const double vb = values[static_cast<std::size_t>(b)];
    return va != vb ? va > vb : a < b;
  });

  Eigen::VectorXd best_x = candidates.row(order[0]).transpose();
  double best_value = values[static_cast<std::size_t>(order[0])];

  const int restarts = std::min(budget.local_restarts, budget.screen_count);
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd x = candidates.row(order[static_cast<std::size_t>(r)]).transpose();
    double value = values[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    Eigen::VectorXd step = 0.1 * (box.hi - box.lo);
    int evals = 0;
    while (evals < budget.refine_evals && step.maxCoeff() > 1e-9) {
      bool improved = false;
      for (int d = 0; d < dim && evals < budget.refine_evals; ++d) {
        for (const double dir : {+1.0, -1.0}) {
          if (evals >= budget.refine_evals) break;
          Eigen::VectorXd trial = x;
          trial[d] = std::clamp(trial[d] + dir * step[d], box.lo[d], box.hi[d]);
          if (trial[d] == x[d]) continue;
          const double trial_value = fn(trial);
          ++evals;
          if (trial_value > value) {
            x = trial;
            value = trial_value;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (value > best_value) {
      best_value = value;
      best_x = x;
    }
  }
  return {best_x, best_value};
}

std::pair<Eigen::VectorXd, double> maximize_acquisition(const AcquisitionContext& ctx,
                                                        AcquisitionKind kind,
                                                        const DesignBox& box,
                                                        const SearchBudget& budget, Rng rng) {
  const detail::ImprovementModel improvement(ctx.archive,
                                             /*use_probs=*/kind == AcquisitionKind::kPehi);
  // One shared substream for every evaluation: common random numbers make
  // the Monte-Carlo estimates comparable across candidates.
  const Rng eval_rng = rng.split(777);
  const auto fn = [&](const Eigen::VectorXd& x) {
    return kind == AcquisitionKind::kPehi
               ? detail::pehi_impl(ctx, improvement, x, eval_rng)
               : detail::mc_improvement(ctx.models, improvement, x, ctx.mc_rounds,
                                        eval_rng.split(detail::kObjectiveStream));
  };
  return maximize_function(fn, box, budget, rng);
}

}  // namespace mobopc
