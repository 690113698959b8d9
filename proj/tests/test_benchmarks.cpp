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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mobopc/benchmarks.hpp"
#include "mobopc/errors.hpp"
#include "mobopc/rng.hpp"
#include "oracles.hpp"

using namespace mobopc;

namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    path_ = (std::filesystem::temp_directory_path() /
             ("mobopc_test_" + std::to_string(counter_++) + ".csv"))
                .string();
    std::ofstream out(path_);
    out << contents;
  }
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  static int counter_;
  std::string path_;
};
int TempFile::counter_ = 0;

}  // namespace

TEST_CASE("schaffer_n1 values and gradients at the landmark points") {
  const BenchmarkSpec bench = get_benchmark("schaffer_n1");
  CHECK(bench.design_dim == 1);
  CHECK(bench.num_objectives == 2);

  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK(bench.evaluate(x) == Eigen::Vector2d(0.0, 4.0));
  x << 2.0;
  CHECK(bench.evaluate(x) == Eigen::Vector2d(4.0, 0.0));
  x << 1.0;
  CHECK(bench.evaluate(x) == Eigen::Vector2d(1.0, 1.0));
  const Eigen::MatrixXd grad = bench.analytic_gradient(x);
  CHECK(grad(0, 0) == 2.0);
  CHECK(grad(0, 1) == -2.0);
  // Opposite gradient signs: the hallmark of an interior Pareto point.
  CHECK(grad(0, 0) * grad(0, 1) < 0.0);
}

TEST_CASE("benchmark dimensions and directions") {
  const BenchmarkSpec poloni = get_benchmark("poloni");
  CHECK(poloni.design_dim == 2);
  CHECK(poloni.num_objectives == 2);
  const BenchmarkSpec viennet = get_benchmark("viennet");
  CHECK(viennet.design_dim == 2);
  CHECK(viennet.num_objectives == 3);
  for (const auto& name : benchmark_names()) {
    const BenchmarkSpec bench = get_benchmark(name);
    for (const Direction d : bench.directions) CHECK(d == Direction::kMinimize);
    CHECK((bench.bounds.hi - bench.bounds.lo).minCoeff() > 0.0);
  }
}

TEST_CASE("analytic gradients agree with finite differences everywhere") {
  Rng rng(606);
  for (const auto& name : benchmark_names()) {
    const BenchmarkSpec bench = get_benchmark(name);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(bench.design_dim);
      for (int d = 0; d < bench.design_dim; ++d) {
        x[d] = rng.uniform(bench.bounds.lo[d], bench.bounds.hi[d]);
      }
      const Eigen::MatrixXd analytic = bench.analytic_gradient(x);
      for (int i = 0; i < bench.num_objectives; ++i) {
        const Eigen::VectorXd numeric = oracle::finite_diff_gradient(
            [&](const Eigen::VectorXd& q) { return bench.evaluate(q)[i]; }, x, 1e-5);
        const double scale = std::max(1.0, analytic.col(i).norm());
        CHECK((analytic.col(i) - numeric).norm() / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("evaluations are bit-reproducible") {
  const BenchmarkSpec bench = get_benchmark("viennet");
  Eigen::VectorXd x(2);
  x << 0.77, -1.31;
  const Eigen::VectorXd first = bench.evaluate(x);
  for (int i = 0; i < 5; ++i) CHECK(bench.evaluate(x) == first);
}

TEST_CASE("unknown benchmark names list the available ones") {
  try {
    get_benchmark("zitzler");
    FAIL("expected InvalidDataError");
  } catch (const InvalidDataError& e) {
    const std::string message = e.what();
    CHECK(message.find("schaffer_n1") != std::string::npos);
    CHECK(message.find("poloni") != std::string::npos);
    CHECK(message.find("viennet") != std::string::npos);
  }
}

TEST_CASE("tabular loading binds columns by name") {
  const TempFile file(
      "tbumper,thood,HIC,Mass\n"
      "1.0,2.0,110.0,33.0\n"
      "2.5,1.5,95.0,38.0\n"
      "4.0,4.5,80.0,45.5\n");
  TabularSchema schema;
  schema.input_columns = {"tbumper", "thood"};
  schema.objective_columns = {"HIC", "Mass"};
  const TabularDataset data = load_tabular(file.path(), schema);
  CHECK(data.inputs.rows() == 3);
  CHECK(data.inputs(1, 0) == 2.5);
  CHECK(data.objectives(2, 1) == 45.5);
  REQUIRE(data.directions.size() == 2);
  CHECK(data.directions[0] == Direction::kMinimize);
  CHECK(data.directions[1] == Direction::kMinimize);
}

TEST_CASE("tabular loading reports bad cells with row and column") {
  const TempFile file(
      "a,b,f\n"
      "1.0,2.0,3.0\n"
      "1.5,oops,2.0\n");
  TabularSchema schema;
  schema.input_columns = {"a", "b"};
  schema.objective_columns = {"f"};
  try {
    load_tabular(file.path(), schema);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string message = e.what();
    CHECK(message.find("row 3") != std::string::npos);
    CHECK(message.find("'b'") != std::string::npos);
  }
}

TEST_CASE("tabular loading rejects structural problems") {
  TabularSchema schema;
  schema.input_columns = {"a"};
  schema.objective_columns = {"f"};

  const TempFile missing_column("a,g\n1,2\n");
  CHECK_THROWS_AS(load_tabular(missing_column.path(), schema), ParseError);

  const TempFile ragged("a,f\n1,2\n3\n");
  CHECK_THROWS_AS(load_tabular(ragged.path(), schema), ParseError);

  const TempFile empty("");
  CHECK_THROWS_AS(load_tabular(empty.path(), schema), ParseError);

  const TempFile header_only("a,f\n");
  CHECK_THROWS_AS(load_tabular(header_only.path(), schema), ParseError);

  CHECK_THROWS_AS(load_tabular("/nonexistent/nope.csv", schema), ParseError);
}
