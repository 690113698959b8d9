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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "mobopc/errors.hpp"
#include "mobopc/optimizer.hpp"
#include "oracles.hpp"

using namespace mobopc;

namespace {

ObjectiveSpec constant_objective(double a, double b) {
  ObjectiveSpec spec;
  spec.id = "constant";
  spec.design_dim = 1;
  spec.num_objectives = 2;
  spec.bounds.lo = Eigen::VectorXd::Constant(1, 0.0);
  spec.bounds.hi = Eigen::VectorXd::Constant(1, 1.0);
  spec.directions = {Direction::kMaximize, Direction::kMaximize};
  Eigen::VectorXd y(2);
  y << a, b;
  spec.evaluate = [y](const Eigen::VectorXd&) { return y; };
  spec.analytic_gradient = [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(1, 2); };
  return spec;
}

RunConfig small_schaffer_config(std::uint64_t seed, bool constrained) {
  RunConfig config;
  config.benchmark = "schaffer_n1";
  if (constrained) config.preference_tuples = {{0, 1}};
  config.iterations = 3;
  config.initial_design = 4;
  config.seed = seed;
  config.mc_rounds = 64;
  config.prob_rounds = 128;
  config.search.screen_count = 24;
  config.search.local_restarts = 2;
  config.search.refine_evals = 8;
  return config;
}

bool same_record(const IterationRecord& a, const IterationRecord& b) {
  const auto same_double = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.index == b.index && a.initial == b.initial && a.x == b.x && a.y == b.y &&
         same_double(a.acquisition, b.acquisition) && same_double(a.s_x, b.s_x) &&
         same_double(a.hypervolume, b.hypervolume);
}

}  // namespace

TEST_CASE("one iteration on a constant objective appends exactly one point") {
  RunConfig config;
  config.benchmark = "ignored";
  config.iterations = 1;
  config.initial_design = 3;
  config.seed = 5;
  config.mc_rounds = 32;
  config.search.screen_count = 8;
  config.search.refine_evals = 4;

  const RunTrace trace = run(config, constant_objective(1.5, -0.5));
  CHECK_FALSE(trace.aborted);
  CHECK(trace.records.size() == 4);
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    CHECK(trace.records[i].hypervolume >= trace.records[i - 1].hypervolume - 1e-12);
  }
  CHECK(trace.dominant.size() == 1);  // all outcomes identical, duplicates collapse
}

TEST_CASE("runs are deterministic given config and seed") {
  const RunConfig config = small_schaffer_config(42, true);
  const RunTrace a = run(config);
  const RunTrace b = run(config);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(same_record(a.records[i], b.records[i]));
  }
  CHECK(a.final_hypervolume == b.final_hypervolume);
  CHECK(a.dominant == b.dominant);
}

TEST_CASE("the archive grows by exactly one point per iteration") {
  const RunConfig config = small_schaffer_config(7, true);
  const RunTrace trace = run(config);
  CHECK_FALSE(trace.aborted);
  CHECK(static_cast<int>(trace.records.size()) == config.initial_design + config.iterations);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    CHECK(trace.records[i].index == static_cast<int>(i));
    CHECK(trace.records[i].initial == (i < static_cast<std::size_t>(config.initial_design)));
  }
  // Hypervolume trajectory is non-decreasing.
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    CHECK(trace.records[i].hypervolume >= trace.records[i - 1].hypervolume - 1e-12);
  }
  // Constrained BO rows carry probabilities and acquisition values.
  for (std::size_t i = static_cast<std::size_t>(config.initial_design);
       i < trace.records.size(); ++i) {
    CHECK_FALSE(std::isnan(trace.records[i].s_x));
    CHECK(trace.records[i].s_x >= 0.0);
    CHECK(trace.records[i].s_x <= 1.0);
    CHECK(trace.records[i].acquisition >= 0.0);
  }
  for (const auto& point : trace.archive.points) {
    REQUIRE(point.prob.has_value());
    CHECK(*point.prob >= 0.0);
    CHECK(*point.prob <= 1.0);
  }
}

TEST_CASE("without preference tuples the run is plain EHI") {
  const RunConfig config = small_schaffer_config(11, false);
  const RunTrace trace = run(config);
  CHECK_FALSE(trace.constrained());
  for (std::size_t i = static_cast<std::size_t>(config.initial_design);
       i < trace.records.size(); ++i) {
    CHECK(std::isnan(trace.records[i].s_x));
  }
  for (const auto& point : trace.archive.points) CHECK_FALSE(point.prob.has_value());
}

TEST_CASE("objective failures abort with a partial trace after retries") {
  auto calls = std::make_shared<int>(0);
  ObjectiveSpec flaky = constant_objective(1.0, 1.0);
  flaky.evaluate = [calls](const Eigen::VectorXd&) -> Eigen::VectorXd {
    if (++*calls <= 3) {
      Eigen::VectorXd y(2);
      y << static_cast<double>(*calls), 1.0;
      return y;
    }
    throw std::runtime_error("sensor offline");
  };

  RunConfig config;
  config.benchmark = "ignored";
  config.iterations = 2;
  config.initial_design = 3;
  config.seed = 1;
  config.mc_rounds = 16;
  config.search.screen_count = 6;
  config.search.refine_evals = 4;

  const RunTrace trace = run(config, flaky);
  CHECK(trace.aborted);
  CHECK(trace.records.size() == 3);  // the initial design only
  CHECK(trace.abort_reason.find("retries") != std::string::npos);
  REQUIRE(trace.evaluation_failures.size() == 4);  // first attempt + 3 retries
  CHECK(trace.evaluation_failures[0].find("sensor offline") != std::string::npos);
}

TEST_CASE("merging a run with itself reproduces its front") {
  const RunTrace trace = run(small_schaffer_config(3, true));
  const std::vector<RunTrace> twice = {trace, trace};
  const MergedResult merged = merge_runs(std::span<const RunTrace>(twice));
  CHECK(merged.points.size() == trace.dominant.size());
  for (const auto& point : merged.points) {
    CHECK(point.probs.size() == 2);
    for (double p : point.probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("merged fronts are non-dominated within the union") {
  const RunTrace a = run(small_schaffer_config(3, true));
  RunConfig other = small_schaffer_config(4, true);
  other.preference_tuples = {{1, 0}};
  const RunTrace b = run(other);

  const std::vector<RunTrace> traces = {a, b};
  const MergedResult merged = merge_runs(std::span<const RunTrace>(traces));
  CHECK_FALSE(merged.points.empty());

  std::vector<Eigen::VectorXd> union_internal;
  for (const auto& trace : traces) {
    for (const auto& rec : trace.records) {
      Eigen::VectorXd internal(2);
      internal << -rec.y[0], -rec.y[1];  // both objectives minimised
      union_internal.push_back(internal);
    }
  }
  for (const auto& point : merged.points) {
    for (const auto& rival : union_internal) {
      CHECK_FALSE(dominates(rival, point.y_internal));
    }
  }
}

TEST_CASE("disjoint non-dominating fronts are both retained") {
  // Two hand-built unconstrained traces whose points interleave along the
  // front, so the union is entirely non-dominated.
  const auto make_trace = [](std::initializer_list<double> xs) {
    RunTrace trace;
    trace.objective = resolve_objective(small_schaffer_config(0, false));
    Eigen::VectorXd signs(2);
    signs << -1.0, -1.0;
    int index = 0;
    for (double x : xs) {
      IterationRecord rec;
      rec.index = index++;
      rec.x = Eigen::VectorXd::Constant(1, x);
      rec.y = trace.objective.evaluate(rec.x);
      trace.archive.points.push_back({rec.x, signs.cwiseProduct(rec.y), std::nullopt});
      trace.records.push_back(std::move(rec));
    }
    return trace;
  };
  // All of [0, 2] is Pareto-optimal for schaffer_n1.
  const std::vector<RunTrace> traces = {make_trace({0.2, 0.6, 1.0}),
                                        make_trace({0.4, 0.8, 1.2})};
  const MergedResult merged = merge_runs(std::span<const RunTrace>(traces));
  CHECK(merged.points.size() == 6);
  CHECK(merged.trace_with_probs.empty());
}

TEST_CASE("viennet with partial constraints merges into a clean front") {
  // Two independent single-pair preferences handled as separate runs whose
  // results are merged.
  RunConfig config;
  config.benchmark = "viennet";
  config.preference_tuples = {{0, 1}, {2, 1}};
  config.constraint_mode = ConstraintMode::kMerge;
  config.iterations = 4;
  config.initial_design = 5;
  config.seed = 31;
  config.mc_rounds = 48;
  config.prob_rounds = 96;
  config.search.screen_count = 16;
  config.search.local_restarts = 1;
  config.search.refine_evals = 6;

  const MergedRun out = run_merged(config);
  REQUIRE(out.traces.size() == 2);
  CHECK_FALSE(out.merged.points.empty());

  std::vector<Eigen::VectorXd> union_internal;
  for (const auto& trace : out.traces) {
    for (const auto& point : trace.archive.points) union_internal.push_back(point.y);
  }
  for (const auto& point : out.merged.points) {
    REQUIRE(point.probs.size() == 2);
    for (double p : point.probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    for (const auto& rival : union_internal) {
      CHECK_FALSE(dominates(rival, point.y_internal));
    }
  }
}

TEST_CASE("merge rejects mismatched objectives") {
  const RunTrace a = run(small_schaffer_config(3, true));
  RunConfig other = small_schaffer_config(3, true);
  other.benchmark = "poloni";
  other.preference_tuples = {{0, 1}};
  const RunTrace b = run(other);
  const std::vector<RunTrace> traces = {a, b};
  CHECK_THROWS_AS(merge_runs(std::span<const RunTrace>(traces)), ContractError);
}

TEST_CASE("merge mode splits the budget across tuples") {
  RunConfig config = small_schaffer_config(9, true);
  config.preference_tuples = {{0, 1}, {1, 0}};
  config.constraint_mode = ConstraintMode::kMerge;
  config.iterations = 4;
  const MergedRun out = run_merged(config);
  REQUIRE(out.traces.size() == 2);
  CHECK(out.traces[0].records.size() == 4 + 2);  // initial + half the budget
  CHECK(out.traces[1].records.size() == 4 + 2);
  CHECK_FALSE(out.merged.points.empty());
  for (const auto& point : out.merged.points) CHECK(point.probs.size() == 2);
}

TEST_CASE("compliance counts constrained Pareto points") {
  // Hand-built trace: Schaffer observations at three Pareto-optimal designs,
  // two of which satisfy the f0-stability preference (x <= 1).
  RunTrace trace;
  trace.objective = resolve_objective(small_schaffer_config(0, true));
  trace.bases.push_back(build_basis(PreferenceTuple({0, 1}, 2)));
  const std::vector<double> xs = {0.3, 0.7, 1.6};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    IterationRecord rec;
    rec.index = static_cast<int>(i);
    rec.x = Eigen::VectorXd::Constant(1, xs[i]);
    rec.y = trace.objective.evaluate(rec.x);
    trace.records.push_back(rec);
    trace.dominant.push_back(static_cast<int>(i));
  }
  const ComplianceResult result = compliance(trace, GradientSource::kAnalytic);
  CHECK(result.total == 3);
  CHECK(result.satisfied == 2);
  CHECK(result.value == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(result.vacuous);

  SUBCASE("all points constrained-Pareto gives full compliance") {
    trace.dominant = {0, 1};
    CHECK(compliance(trace, GradientSource::kAnalytic).value == 1.0);
  }
  SUBCASE("an empty front is vacuously compliant") {
    trace.dominant.clear();
    const ComplianceResult vac = compliance(trace, GradientSource::kAnalytic);
    CHECK(vac.value == 1.0);
    CHECK(vac.vacuous);
  }
}

TEST_CASE("gp-gradient compliance works on a real run") {
  const RunTrace trace = run(small_schaffer_config(21, true));
  REQUIRE_FALSE(trace.final_models.empty());
  const ComplianceResult gp = compliance(trace, GradientSource::kGp);
  CHECK(gp.total == static_cast<int>(trace.dominant.size()));
  CHECK(gp.value >= 0.0);
  CHECK(gp.value <= 1.0);
}

TEST_CASE("config validation") {
  RunConfig config = small_schaffer_config(0, true);
  config.iterations = 0;
  CHECK_THROWS_AS(run(config), InvalidDataError);

  config = small_schaffer_config(0, true);
  config.initial_design = 1;
  CHECK_THROWS_AS(run(config), InvalidDataError);

  config = small_schaffer_config(0, true);
  config.benchmark = "";
  CHECK_THROWS_AS(run(config), InvalidDataError);
}

TEST_CASE("discrete candidates are drawn from the table") {
  // A small synthetic candidate table: inputs on a grid, objectives from
  // schaffer_n1 restricted to those inputs.
  const BenchmarkSpec bench = get_benchmark("schaffer_n1");
  ObjectiveSpec spec;
  spec.id = "table";
  spec.design_dim = 1;
  spec.num_objectives = 2;
  spec.directions = bench.directions;
  const int rows = 12;
  Eigen::MatrixXd candidates(rows, 1);
  for (int r = 0; r < rows; ++r) candidates(r, 0) = -2.0 + 0.5 * r;
  spec.candidates = candidates;
  spec.bounds.lo = Eigen::VectorXd::Constant(1, -2.0);
  spec.bounds.hi = Eigen::VectorXd::Constant(1, 3.5);
  spec.evaluate = [bench, candidates](const Eigen::VectorXd& x) {
    for (int r = 0; r < candidates.rows(); ++r) {
      if (candidates.row(r).transpose() == x) return bench.evaluate(x);
    }
    throw InvalidDataError("not a candidate");
  };
  spec.analytic_gradient = bench.analytic_gradient;

  RunConfig config;
  config.benchmark = "ignored";
  config.preference_tuples = {{0, 1}};
  config.iterations = 3;
  config.initial_design = 3;
  config.seed = 2;
  config.mc_rounds = 32;
  config.prob_rounds = 64;

  const RunTrace trace = run(config, spec);
  CHECK_FALSE(trace.aborted);
  CHECK(trace.records.size() == 6);
  // Every evaluated design is one of the candidate rows, with no repeats.
  std::vector<double> seen;
  for (const auto& rec : trace.records) {
    CHECK(((candidates.array() - rec.x[0]).abs() < 1e-15).any());
    for (double s : seen) CHECK(s != rec.x[0]);
    seen.push_back(rec.x[0]);
  }
}
