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

#include "mobopc/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "mobopc/constraint_prob.hpp"
#include "mobopc/errors.hpp"

namespace mobopc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd direction_signs(const std::vector<Direction>& directions) {
  Eigen::VectorXd signs(static_cast<Eigen::Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) {
    signs[static_cast<Eigen::Index>(i)] = directions[i] == Direction::kMaximize ? 1.0 : -1.0;
  }
  return signs;
}

/// Reference point in the internal (maximisation) scale: the configured
/// override if any, else componentwise min of the observed values minus 10%
/// of the observed range.
Eigen::VectorXd internal_reference(const RunConfig& config, const Eigen::VectorXd& signs,
                                   const Eigen::MatrixXd& internal_y) {
  const int m = static_cast<int>(internal_y.cols());
  Eigen::VectorXd z(m);
  if (config.reference_override.has_value()) {
    if (config.reference_override->size() != m) {
      throw InvalidDataError("run: reference override has wrong dimension");
    }
    z = signs.cwiseProduct(*config.reference_override);
    return z;
  }
  for (int i = 0; i < m; ++i) {
    const double lo = internal_y.col(i).minCoeff();
    const double hi = internal_y.col(i).maxCoeff();
    double pad = 0.1 * (hi - lo);
    if (pad <= 0.0) pad = 1e-6 * std::max(1.0, std::abs(lo));
    z[i] = lo - pad;
  }
  return z;
}

struct EvalOutcome {
  bool ok = false;
  Eigen::VectorXd y;
  std::string error;
};

EvalOutcome try_evaluate(const ObjectiveSpec& objective, const Eigen::VectorXd& x) {
  EvalOutcome out;
  try {
    out.y = objective.evaluate(x);
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
  if (out.y.size() != objective.num_objectives || !out.y.allFinite()) {
    out.error = "objective returned a malformed value";
    return out;
  }
  out.ok = true;
  return out;
}

std::vector<Eigen::VectorXd> internal_points(const Eigen::MatrixXd& internal_y) {
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(internal_y.rows()));
  for (Eigen::Index r = 0; r < internal_y.rows(); ++r) {
    points.push_back(internal_y.row(r).transpose());
  }
  return points;
}

}  // namespace

ObjectiveSpec resolve_objective(const RunConfig& config) {
  if (config.benchmark.empty() == !config.dataset.has_value()) {
    throw InvalidDataError("run: exactly one of benchmark / dataset must be given");
  }

  ObjectiveSpec spec;
  if (!config.benchmark.empty()) {
    const BenchmarkSpec bench = get_benchmark(config.benchmark);
    spec.id = bench.name;
    spec.design_dim = bench.design_dim;
    spec.num_objectives = bench.num_objectives;
    spec.bounds = bench.bounds;
    spec.evaluate = bench.evaluate;
    spec.analytic_gradient = bench.analytic_gradient;
    spec.directions = bench.directions;
  } else {
    const TabularDataset data = load_tabular(config.dataset->path, config.dataset->schema);
    spec.id = config.dataset->path;
    spec.design_dim = static_cast<int>(data.inputs.cols());
    spec.num_objectives = static_cast<int>(data.objectives.cols());
    spec.directions = data.directions;
    spec.bounds.lo = data.inputs.colwise().minCoeff().transpose();
    spec.bounds.hi = data.inputs.colwise().maxCoeff().transpose();
    spec.candidates = data.inputs;
    // Row lookup by exact design match; the loop only queries candidate rows.
    const Eigen::MatrixXd inputs = data.inputs;
    const Eigen::MatrixXd objectives = data.objectives;
    spec.evaluate = [inputs, objectives](const Eigen::VectorXd& x) {
      for (Eigen::Index r = 0; r < inputs.rows(); ++r) {
        if (inputs.row(r).transpose() == x) return Eigen::VectorXd(objectives.row(r).transpose());
      }
      throw InvalidDataError("tabular objective: query is not a candidate row");
    };
  }

  if (config.directions_override.has_value()) {
    if (config.directions_override->size() != static_cast<std::size_t>(spec.num_objectives)) {
      throw InvalidDataError("run: directions override has wrong length");
    }
    spec.directions = *config.directions_override;
  }
  if (config.bounds_override.has_value()) {
    if (config.bounds_override->dim() != spec.design_dim) {
      throw InvalidDataError("run: bounds override has wrong dimension");
    }
    spec.bounds = *config.bounds_override;
  }
  if ((spec.bounds.hi.array() < spec.bounds.lo.array()).any()) {
    throw InvalidDataError("run: reversed design bounds");
  }
  return spec;
}

RunTrace run(const RunConfig& config) { return run(config, resolve_objective(config)); }

RunTrace run(const RunConfig& config, const ObjectiveSpec& objective) {
  if (config.iterations < 1) throw InvalidDataError("run: iterations must be >= 1");
  if (config.initial_design != 0 && config.initial_design < 2) {
    throw InvalidDataError("run: initial design size must be >= 2");
  }
  const int n = objective.design_dim;
  const int m = objective.num_objectives;
  if (static_cast<int>(objective.directions.size()) != m) {
    throw InvalidDataError("run: one direction per objective required");
  }

  RunTrace trace;
  trace.config = config;
  trace.objective = objective;
  for (const auto& tuple : config.preference_tuples) {
    trace.bases.push_back(build_basis(PreferenceTuple(tuple, m)));
  }

  const Eigen::VectorXd signs = direction_signs(objective.directions);
  const int init_count = config.initial_design > 0
                             ? config.initial_design
                             : std::max(5, 2 * n);
  const bool discrete = objective.candidates.has_value();

  Rng master(config.seed);
  Eigen::MatrixXd design(0, n);
  Eigen::MatrixXd internal_y(0, m);
  std::vector<bool> candidate_used;
  if (discrete) {
    candidate_used.assign(static_cast<std::size_t>(objective.candidates->rows()), false);
  }

  const auto abort_run = [&](const std::string& reason) {
    trace.aborted = true;
    trace.abort_reason = reason;
  };

  const auto append_observation = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y_orig,
                                      bool initial, double acq, double s_x, double wall_s) {
    const Eigen::Index row = design.rows();
    design.conservativeResize(row + 1, Eigen::NoChange);
    internal_y.conservativeResize(row + 1, Eigen::NoChange);
    design.row(row) = x.transpose();
    internal_y.row(row) = (signs.cwiseProduct(y_orig)).transpose();

    IterationRecord rec;
    rec.index = static_cast<int>(row);
    rec.initial = initial;
    rec.x = x;
    rec.y = y_orig;
    rec.acquisition = acq;
    rec.s_x = s_x;
    rec.wall_time_s = wall_s;
    const Eigen::VectorXd z = internal_reference(config, signs, internal_y);
    rec.hypervolume = hypervolume(internal_points(internal_y), z);
    trace.records.push_back(std::move(rec));
  };

  // Initial design: Latin hypercube over the box, or a random subset of the
  // candidate rows in discrete mode.
  {
    Rng init_rng = master.split(1);
    if (discrete) {
      const int rows = static_cast<int>(objective.candidates->rows());
      std::vector<int> order(static_cast<std::size_t>(rows));
      std::iota(order.begin(), order.end(), 0);
      for (int i = rows - 1; i > 0; --i) {
        const int j = static_cast<int>(init_rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
      }
      const int take = std::min(init_count, rows);
      for (int i = 0; i < take; ++i) {
        const int row = order[static_cast<std::size_t>(i)];
        const Eigen::VectorXd x = objective.candidates->row(row).transpose();
        const auto outcome = try_evaluate(objective, x);
        if (!outcome.ok) {
          trace.evaluation_failures.push_back("initial design: " + outcome.error);
          abort_run("initial design evaluation failed: " + outcome.error);
          break;
        }
        candidate_used[static_cast<std::size_t>(row)] = true;
        append_observation(x, outcome.y, true, kNaN, kNaN, 0.0);
      }
    } else {
      const Eigen::MatrixXd initial = latin_hypercube(init_count, objective.bounds, init_rng);
      for (int i = 0; i < initial.rows(); ++i) {
        const Eigen::VectorXd x = initial.row(i).transpose();
        const auto outcome = try_evaluate(objective, x);
        if (!outcome.ok) {
          trace.evaluation_failures.push_back("initial design: " + outcome.error);
          abort_run("initial design evaluation failed: " + outcome.error);
          break;
        }
        append_observation(x, outcome.y, true, kNaN, kNaN, 0.0);
      }
    }
  }

  std::vector<KernelSpec> warm_kernels;
  const auto fit_models = [&]() {
    std::vector<GpModel> models;
    models.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const Eigen::VectorXd targets = internal_y.col(i);
      const HyperBounds bounds = HyperBounds::auto_for(design, targets);
      const KernelSpec* warm =
          warm_kernels.size() == static_cast<std::size_t>(m) ? &warm_kernels[static_cast<std::size_t>(i)] : nullptr;
      models.push_back(GpModel::fit(design, targets, bounds, warm));
    }
    warm_kernels.clear();
    for (const auto& model : models) warm_kernels.push_back(model.kernel());
    return models;
  };

  const AcquisitionKind kind =
      trace.bases.empty() ? AcquisitionKind::kEhi : AcquisitionKind::kPehi;

  for (int t = 0; t < config.iterations && !trace.aborted; ++t) {
    const auto started = std::chrono::steady_clock::now();
    Rng iter_rng = master.split(1000 + static_cast<std::uint64_t>(t));

    std::vector<GpModel> models = fit_models();
    const Eigen::VectorXd z = internal_reference(config, signs, internal_y);

    AcquisitionContext ctx;
    ctx.models = std::span<const GpModel>(models);
    ctx.bases = trace.bases;
    ctx.mc_rounds = config.mc_rounds;
    ctx.prob_rounds = config.prob_rounds;
    ctx.archive.reference = z;
    for (Eigen::Index r = 0; r < design.rows(); ++r) {
      ArchivePoint point;
      point.x = design.row(r).transpose();
      point.y = internal_y.row(r).transpose();
      if (kind == AcquisitionKind::kPehi) {
        point.prob = prob_satisfies(ctx.models, std::span<const ConeBasis>(trace.bases),
                                    point.x, config.prob_rounds,
                                    iter_rng.split(5000 + static_cast<std::uint64_t>(r)))
                         .value;
      }
      ctx.archive.points.push_back(std::move(point));
    }

    // Pick a candidate; objective failures fall through to the next-best
    // one, at most 3 retries.
    bool appended = false;
    if (discrete) {
      const Rng eval_rng = iter_rng.split(1);
      std::vector<std::pair<double, int>> ranked;
      for (std::size_t row = 0; row < candidate_used.size(); ++row) {
        if (candidate_used[row]) continue;
        const Eigen::VectorXd x = objective.candidates->row(static_cast<int>(row)).transpose();
        const double value = kind == AcquisitionKind::kPehi ? pehi(ctx, x, eval_rng)
                                                            : ehi(ctx, x, eval_rng);
        ranked.emplace_back(value, static_cast<int>(row));
      }
      if (ranked.empty()) {
        abort_run("candidate pool exhausted");
        break;
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      const int attempts = std::min<int>(4, static_cast<int>(ranked.size()));
      for (int attempt = 0; attempt < attempts; ++attempt) {
        const int row = ranked[static_cast<std::size_t>(attempt)].second;
        const Eigen::VectorXd x = objective.candidates->row(row).transpose();
        const auto outcome = try_evaluate(objective, x);
        if (!outcome.ok) {
          trace.evaluation_failures.push_back("iteration " + std::to_string(t) + ": " +
                                              outcome.error);
          continue;
        }
        candidate_used[static_cast<std::size_t>(row)] = true;
        double s_x = kNaN;
        if (kind == AcquisitionKind::kPehi) {
          s_x = prob_satisfies(ctx.models, std::span<const ConeBasis>(trace.bases), x,
                               config.prob_rounds, iter_rng.split(2))
                    .value;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        append_observation(x, outcome.y, false,
                           ranked[static_cast<std::size_t>(attempt)].first, s_x, wall);
        appended = true;
        break;
      }
    } else {
      for (int attempt = 0; attempt < 4; ++attempt) {
        const auto [x, value] = maximize_acquisition(
            ctx, kind, objective.bounds, config.search,
            iter_rng.split(1 + 10 * static_cast<std::uint64_t>(attempt)));
        const auto outcome = try_evaluate(objective, x);
        if (!outcome.ok) {
          trace.evaluation_failures.push_back("iteration " + std::to_string(t) + ": " +
                                              outcome.error);
          continue;
        }
        double s_x = kNaN;
        if (kind == AcquisitionKind::kPehi) {
          s_x = prob_satisfies(ctx.models, std::span<const ConeBasis>(trace.bases), x,
                               config.prob_rounds, iter_rng.split(2))
                    .value;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        append_observation(x, outcome.y, false, value, s_x, wall);
        appended = true;
        break;
      }
    }
    if (!appended && !trace.aborted) {
      abort_run("objective evaluation failed after 3 retries");
    }
  }

  // Final state: models fitted on everything, per-point probabilities under
  // the run's own bases, dominant subset and its hypervolume.
  if (design.rows() == 0) {
    trace.archive.reference = Eigen::VectorXd::Zero(m);
    return trace;
  }
  if (design.rows() > 1) {
    trace.final_models = fit_models();
  }
  const Eigen::VectorXd z = internal_reference(config, signs, internal_y);
  trace.archive.reference = z;
  Rng final_rng = master.split(2);
  for (Eigen::Index r = 0; r < design.rows(); ++r) {
    ArchivePoint point;
    point.x = design.row(r).transpose();
    point.y = internal_y.row(r).transpose();
    if (trace.constrained() && !trace.final_models.empty()) {
      point.prob =
          prob_satisfies(std::span<const GpModel>(trace.final_models),
                         std::span<const ConeBasis>(trace.bases), point.x, config.prob_rounds,
                         final_rng.split(static_cast<std::uint64_t>(r)))
              .value;
    }
    trace.archive.points.push_back(std::move(point));
  }
  trace.dominant = dominant_indices(internal_points(internal_y));
  trace.final_hypervolume = hypervolume(internal_points(internal_y), z);
  for (Eigen::Index r = 0; r < internal_y.rows(); ++r) {
    if (!((internal_y.row(r).transpose().array() > z.array()).all())) ++trace.reference_dropped;
  }
  return trace;
}

MergedResult merge_runs(std::span<const RunTrace> traces) {
  if (traces.empty()) throw ContractError("merge_runs: no traces given");
  const RunTrace& first = traces[0];
  for (const auto& trace : traces) {
    if (trace.objective.id != first.objective.id ||
        trace.objective.directions != first.objective.directions ||
        trace.objective.design_dim != first.objective.design_dim ||
        trace.objective.num_objectives != first.objective.num_objectives) {
      throw ContractError("merge_runs: traces do not share an objective spec");
    }
  }

  const Eigen::VectorXd signs = direction_signs(first.objective.directions);
  std::vector<Eigen::VectorXd> xs, ys_internal, ys_original;
  for (const auto& trace : traces) {
    for (const auto& rec : trace.records) {
      xs.push_back(rec.x);
      ys_original.push_back(rec.y);
      ys_internal.push_back(signs.cwiseProduct(rec.y));
    }
  }

  MergedResult result;
  const std::vector<int> front = dominant_indices(ys_internal);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    if (traces[k].constrained()) result.trace_with_probs.push_back(static_cast<int>(k));
  }

  // Recompute probabilities on GPs refitted to the union of observations.
  std::vector<GpModel> models;
  if (!result.trace_with_probs.empty()) {
    const int n = first.objective.design_dim;
    const int m = first.objective.num_objectives;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), n);
    Eigen::MatrixXd internal_y(static_cast<Eigen::Index>(xs.size()), m);
    for (std::size_t r = 0; r < xs.size(); ++r) {
      design.row(static_cast<Eigen::Index>(r)) = xs[r].transpose();
      internal_y.row(static_cast<Eigen::Index>(r)) = ys_internal[r].transpose();
    }
    for (int i = 0; i < m; ++i) {
      models.push_back(GpModel::fit(design, internal_y.col(i)));
    }
  }

  Rng merge_rng(0x4D455247ULL);
  for (std::size_t p = 0; p < front.size(); ++p) {
    const int idx = front[p];
    MergedPoint point;
    point.x = xs[static_cast<std::size_t>(idx)];
    point.y = ys_original[static_cast<std::size_t>(idx)];
    point.y_internal = ys_internal[static_cast<std::size_t>(idx)];
    for (int k : result.trace_with_probs) {
      const auto& trace = traces[static_cast<std::size_t>(k)];
      point.probs.push_back(
          prob_satisfies(std::span<const GpModel>(models),
                         std::span<const ConeBasis>(trace.bases), point.x,
                         trace.config.prob_rounds,
                         merge_rng.split(static_cast<std::uint64_t>(k)).split(p))
              .value);
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

MergedRun run_merged(const RunConfig& config) {
  if (config.preference_tuples.empty()) {
    throw ContractError("run_merged: merge mode needs at least one preference tuple");
  }
  const int splits = static_cast<int>(config.preference_tuples.size());
  const int base_iters = config.iterations / splits;
  const int remainder = config.iterations % splits;

  MergedRun out;
  for (int k = 0; k < splits; ++k) {
    RunConfig sub = config;
    sub.constraint_mode = ConstraintMode::kConjunction;
    sub.preference_tuples = {config.preference_tuples[static_cast<std::size_t>(k)]};
    sub.iterations = std::max(1, base_iters + (k < remainder ? 1 : 0));
    sub.seed = config.seed + 0x9E3779B9ULL * static_cast<std::uint64_t>(k + 1);
    out.traces.push_back(run(sub));
  }
  out.merged = merge_runs(std::span<const RunTrace>(out.traces));
  return out;
}

ComplianceResult compliance_against(const RunTrace& trace, const std::vector<ConeBasis>& bases,
                                    GradientSource source) {
  if (bases.empty()) throw ContractError("compliance: at least one preference basis required");
  if (source == GradientSource::kAnalytic && !trace.objective.analytic_gradient) {
    throw ContractError("compliance: objective has no analytic gradients");
  }
  if (source == GradientSource::kGp && trace.final_models.empty()) {
    throw ContractError("compliance: trace has no fitted models");
  }

  const Eigen::VectorXd signs = direction_signs(trace.objective.directions);
  ComplianceResult result;
  result.total = static_cast<int>(trace.dominant.size());
  if (result.total == 0) {
    result.value = 1.0;
    result.vacuous = true;
    return result;
  }

  const int n = trace.objective.design_dim;
  const int m = trace.objective.num_objectives;
  for (int idx : trace.dominant) {
    const Eigen::VectorXd& x = trace.records[static_cast<std::size_t>(idx)].x;
    Eigen::MatrixXd gradients(n, m);
    if (source == GradientSource::kAnalytic) {
      gradients = trace.objective.analytic_gradient(x);
      for (int i = 0; i < m; ++i) gradients.col(i) *= signs[i];
    } else {
      for (int i = 0; i < m; ++i) {
        gradients.col(i) =
            trace.final_models[static_cast<std::size_t>(i)].gradient_posterior(x).mean;
      }
    }
    if (satisfies_all_preferences(gradients, bases)) ++result.satisfied;
  }
  result.value = static_cast<double>(result.satisfied) / static_cast<double>(result.total);
  return result;
}

ComplianceResult compliance(const RunTrace& trace, GradientSource source) {
  return compliance_against(trace, trace.bases, source);
}

}  // namespace mobopc
