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

#ifndef MOBOPC_OPTIMIZER_HPP
#define MOBOPC_OPTIMIZER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobopc/acquisition.hpp"
#include "mobopc/benchmarks.hpp"
#include "mobopc/cone.hpp"
#include "mobopc/gp.hpp"
#include "mobopc/hypervolume.hpp"

namespace mobopc {

/// How multiple preference tuples are combined: `kConjunction` estimates the
/// probability that one run's samples satisfy all tuples at once;
/// `kMerge` runs one optimisation per tuple (splitting the iteration budget
/// evenly) and merges the resulting fronts.
enum class ConstraintMode { kConjunction, kMerge };

/// Tabular objective source for discrete-candidate optimisation.
struct DatasetSpec {
  std::string path;
  TabularSchema schema;
};

/// Full experiment description. Exactly one of `benchmark` / `dataset` must
/// be set. Empty optional fields fall back to the objective's defaults.
struct RunConfig {
  std::string benchmark;
  std::optional<DatasetSpec> dataset;

  std::vector<std::vector<int>> preference_tuples;
  std::optional<std::vector<Direction>> directions_override;
  std::optional<DesignBox> bounds_override;
  std::optional<Eigen::VectorXd> reference_override;  // original (user) scale

  int iterations = 20;      // T
  int initial_design = 0;   // 0 => max(5, 2n)
  std::uint64_t seed = 0;
  int mc_rounds = kDefaultAcquisitionRounds;
  int prob_rounds = kDefaultProbRounds;
  ConstraintMode constraint_mode = ConstraintMode::kConjunction;
  SearchBudget search;
};

/// A resolved objective the loop can drive: evaluator, bounds, directions,
/// and (for tabular sources) the fixed candidate rows.
struct ObjectiveSpec {
  std::string id;          // benchmark name or dataset path, for merge checks
  int design_dim = 0;      // n
  int num_objectives = 0;  // m
  DesignBox bounds;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluate;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> analytic_gradient;  // may be empty
  std::vector<Direction> directions;
  std::optional<Eigen::MatrixXd> candidates;  // discrete rows, one design per row
};

/// Builds the ObjectiveSpec a config describes (bundled benchmark or loaded
/// dataset), applying any overrides.
ObjectiveSpec resolve_objective(const RunConfig& config);

/// One observation in evaluation order. `acquisition` and `s_x` are NaN for
/// initial-design rows (and `s_x` also for unconstrained runs).
struct IterationRecord {
  int index = 0;
  bool initial = false;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // original (user) scale
  double acquisition = 0.0;
  double s_x = 0.0;
  double hypervolume = 0.0;  // internal-scale dominated HV after this row
  double wall_time_s = 0.0;
};

/// Complete record of one optimisation run. Objective values inside
/// `archive` are in the internal maximisation scale; `records` keep the
/// original scale.
struct RunTrace {
  RunConfig config;
  ObjectiveSpec objective;
  std::vector<ConeBasis> bases;

  std::vector<IterationRecord> records;
  std::vector<GpModel> final_models;  // fitted on all observations
  ParetoArchive archive;              // internal scale; probs set when constrained
  std::vector<int> dominant;          // indices into records/archive of the front
  double final_hypervolume = 0.0;
  int reference_dropped = 0;  // points not strictly dominating z at the end

  bool aborted = false;
  std::string abort_reason;
  std::vector<std::string> evaluation_failures;  // one entry per failed attempt

  bool constrained() const { return !bases.empty(); }
};

/// Runs the full loop: initial Latin-hypercube design, then `iterations`
/// rounds of {fit per-objective GPs, maximise the acquisition (preference-
/// weighted when tuples are given, plain expected hypervolume improvement
/// otherwise), evaluate, append}. Deterministic given the config (seed
/// included). Objective failures are retried at the next-best candidate up
/// to 3 times, then the run aborts with a partial trace.
RunTrace run(const RunConfig& config);
RunTrace run(const RunConfig& config, const ObjectiveSpec& objective);

/// One merged Pareto point with its per-trace recomputed probabilities
/// (empty vector for traces without preference tuples).
struct MergedPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;           // original scale
  Eigen::VectorXd y_internal;  // maximisation scale
  std::vector<double> probs;   // one entry per input trace with tuples
};

struct MergedResult {
  std::vector<MergedPoint> points;
  std::vector<int> trace_with_probs;  // indices of input traces contributing probs
};

/// Merges runs that share an objective: the union of all evaluated points is
/// reduced to its dominant subset, and each point's constraint probability
/// is recomputed (on GPs refitted to the union) under each trace's bases.
MergedResult merge_runs(std::span<const RunTrace> traces);

/// Runs one sub-optimisation per preference tuple (even split of the
/// iteration budget) and merges the fronts.
struct MergedRun {
  std::vector<RunTrace> traces;
  MergedResult merged;
};
MergedRun run_merged(const RunConfig& config);

enum class GradientSource { kAnalytic, kGp };

struct ComplianceResult {
  double value = 0.0;
  bool vacuous = false;  // no Pareto points to check
  int satisfied = 0;
  int total = 0;
};

/// Fraction of the trace's Pareto points whose gradient matrix (analytic
/// benchmark gradients, or the fitted GP posterior gradient means) passes
/// the preference test for every one of the trace's bases.
ComplianceResult compliance(const RunTrace& trace, GradientSource source);

/// Same, but against an explicit basis list (e.g. scoring an unconstrained
/// baseline run against a preference it did not optimise for).
ComplianceResult compliance_against(const RunTrace& trace, const std::vector<ConeBasis>& bases,
                                    GradientSource source);

}  // namespace mobopc

#endif  // MOBOPC_OPTIMIZER_HPP
