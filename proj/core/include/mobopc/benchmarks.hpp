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

#ifndef MOBOPC_BENCHMARKS_HPP
#define MOBOPC_BENCHMARKS_HPP

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "mobopc/acquisition.hpp"

namespace mobopc {

enum class Direction { kMaximize, kMinimize };

/// A synthetic multi-objective test function with analytic gradients.
/// `evaluate` maps an n-vector to the m objective values; `analytic_gradient`
/// returns the n x m matrix of d f_i / d x_j. All bundled functions use the
/// minimisation convention.
struct BenchmarkSpec {
  std::string name;
  int design_dim = 0;      // n
  int num_objectives = 0;  // m
  DesignBox bounds;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluate;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> analytic_gradient;
  std::vector<Direction> directions;
};

/// Bundled functions: "schaffer_n1" (n=1, m=2, x in [-10, 10]),
/// "poloni" (n=2, m=2, x in [-pi, pi]^2), "viennet" (n=2, m=3,
/// x in [-3, 3]^2). Throws InvalidDataError with the list of available
/// names for anything else.
BenchmarkSpec get_benchmark(const std::string& name);
std::vector<std::string> benchmark_names();

/// Column binding for tabular candidate datasets.
struct TabularSchema {
  std::vector<std::string> input_columns;
  std::vector<std::string> objective_columns;
  std::vector<Direction> directions;  // per objective; defaults to minimise
};

/// A rectangular numeric dataset of candidate designs with their objective
/// values, used for discrete-candidate optimisation.
struct TabularDataset {
  Eigen::MatrixXd inputs;      // rows x n
  Eigen::MatrixXd objectives;  // rows x m
  std::vector<std::string> input_names;
  std::vector<std::string> objective_names;
  std::vector<Direction> directions;
};

/// Loads a comma-separated file with a header row. Missing columns and
/// non-numeric cells raise ParseError naming the offending row and column.
TabularDataset load_tabular(const std::string& path, const TabularSchema& schema);

}  // namespace mobopc

#endif  // MOBOPC_BENCHMARKS_HPP
