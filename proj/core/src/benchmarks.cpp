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

#include "mobopc/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include "mobopc/errors.hpp"

namespace mobopc {

namespace {

BenchmarkSpec make_schaffer_n1() {
  BenchmarkSpec spec;
  spec.name = "schaffer_n1";
  spec.design_dim = 1;
  spec.num_objectives = 2;
  spec.bounds.lo = Eigen::VectorXd::Constant(1, -10.0);
  spec.bounds.hi = Eigen::VectorXd::Constant(1, 10.0);
  spec.directions = {Direction::kMinimize, Direction::kMinimize};
  spec.evaluate = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(2);
    y[0] = x[0] * x[0];
    y[1] = (x[0] - 2.0) * (x[0] - 2.0);
    return y;
  };
  spec.analytic_gradient = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd grad(1, 2);
    grad(0, 0) = 2.0 * x[0];
    grad(0, 1) = 2.0 * (x[0] - 2.0);
    return grad;
  };
  return spec;
}

BenchmarkSpec make_poloni() {
  BenchmarkSpec spec;
  spec.name = "poloni";
  spec.design_dim = 2;
  spec.num_objectives = 2;
  const double pi = 3.14159265358979323846;
  spec.bounds.lo = Eigen::VectorXd::Constant(2, -pi);
  spec.bounds.hi = Eigen::VectorXd::Constant(2, pi);
  spec.directions = {Direction::kMinimize, Direction::kMinimize};

  const double a1 = 0.5 * std::sin(1.0) - 2.0 * std::cos(1.0) + std::sin(2.0) -
                    1.5 * std::cos(2.0);
  const double a2 = 1.5 * std::sin(1.0) - std::cos(1.0) + 2.0 * std::sin(2.0) -
                    0.5 * std::cos(2.0);

  spec.evaluate = [a1, a2](const Eigen::VectorXd& x) {
    const double b1 = 0.5 * std::sin(x[0]) - 2.0 * std::cos(x[0]) + std::sin(x[1]) -
                      1.5 * std::cos(x[1]);
    const double b2 = 1.5 * std::sin(x[0]) - std::cos(x[0]) + 2.0 * std::sin(x[1]) -
                      0.5 * std::cos(x[1]);
    Eigen::VectorXd y(2);
    y[0] = 1.0 + (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2);
    y[1] = (x[0] + 3.0) * (x[0] + 3.0) + (x[1] + 1.0) * (x[1] + 1.0);
    return y;
  };
  spec.analytic_gradient = [a1, a2](const Eigen::VectorXd& x) {
    const double b1 = 0.5 * std::sin(x[0]) - 2.0 * std::cos(x[0]) + std::sin(x[1]) -
                      1.5 * std::cos(x[1]);
    const double b2 = 1.5 * std::sin(x[0]) - std::cos(x[0]) + 2.0 * std::sin(x[1]) -
                      0.5 * std::cos(x[1]);
    const double db1_dx0 = 0.5 * std::cos(x[0]) + 2.0 * std::sin(x[0]);
    const double db1_dx1 = std::cos(x[1]) + 1.5 * std::sin(x[1]);
    const double db2_dx0 = 1.5 * std::cos(x[0]) + std::sin(x[0]);
    const double db2_dx1 = 2.0 * std::cos(x[1]) + 0.5 * std::sin(x[1]);
    Eigen::MatrixXd grad(2, 2);
    grad(0, 0) = -2.0 * (a1 - b1) * db1_dx0 - 2.0 * (a2 - b2) * db2_dx0;
    grad(1, 0) = -2.0 * (a1 - b1) * db1_dx1 - 2.0 * (a2 - b2) * db2_dx1;
    grad(0, 1) = 2.0 * (x[0] + 3.0);
    grad(1, 1) = 2.0 * (x[1] + 1.0);
    return grad;
  };
  return spec;
}

BenchmarkSpec make_viennet() {
  BenchmarkSpec spec;
  spec.name = "viennet";
  spec.design_dim = 2;
  spec.num_objectives = 3;
  spec.bounds.lo = Eigen::VectorXd::Constant(2, -3.0);
  spec.bounds.hi = Eigen::VectorXd::Constant(2, 3.0);
  spec.directions = {Direction::kMinimize, Direction::kMinimize, Direction::kMinimize};

  spec.evaluate = [](const Eigen::VectorXd& x) {
    const double r = x[0] * x[0] + x[1] * x[1];
    Eigen::VectorXd y(3);
    y[0] = 0.5 * r + std::sin(r);
    const double u = 3.0 * x[0] - 2.0 * x[1] + 4.0;
    const double v = x[0] - x[1] + 1.0;
    y[1] = u * u / 8.0 + v * v / 27.0 + 15.0;
    y[2] = 1.0 / (r + 1.0) - 1.1 * std::exp(-r);
    return y;
  };
  spec.analytic_gradient = [](const Eigen::VectorXd& x) {
    const double r = x[0] * x[0] + x[1] * x[1];
    const double u = 3.0 * x[0] - 2.0 * x[1] + 4.0;
    const double v = x[0] - x[1] + 1.0;
    Eigen::MatrixXd grad(2, 3);
    const double df0_dr = 0.5 + std::cos(r);
    grad(0, 0) = 2.0 * x[0] * df0_dr;
    grad(1, 0) = 2.0 * x[1] * df0_dr;
    grad(0, 1) = 2.0 * u * 3.0 / 8.0 + 2.0 * v / 27.0;
    grad(1, 1) = 2.0 * u * -2.0 / 8.0 + 2.0 * v * -1.0 / 27.0;
    const double df2_dr = -1.0 / ((r + 1.0) * (r + 1.0)) + 1.1 * std::exp(-r);
    grad(0, 2) = 2.0 * x[0] * df2_dr;
    grad(1, 2) = 2.0 * x[1] * df2_dr;
    return grad;
  };
  return spec;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::vector<std::string> benchmark_names() { return {"schaffer_n1", "poloni", "viennet"}; }

BenchmarkSpec get_benchmark(const std::string& name) {
  if (name == "schaffer_n1") return make_schaffer_n1();
  if (name == "poloni") return make_poloni();
  if (name == "viennet") return make_viennet();
  std::string message = "unknown benchmark '" + name + "'; available:";
  for (const auto& known : benchmark_names()) message += " " + known;
  throw InvalidDataError(message);
}

TabularDataset load_tabular(const std::string& path, const TabularSchema& schema) {
  if (schema.input_columns.empty() || schema.objective_columns.empty()) {
    throw InvalidDataError("load_tabular: schema needs input and objective columns");
  }
  std::ifstream file(path);
  if (!file) throw ParseError("load_tabular: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(file, line)) throw ParseError("load_tabular: '" + path + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);

  const auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError("load_tabular: column '" + name + "' not found in '" + path + "'");
    }
    return static_cast<int>(it - header.begin());
  };

  std::vector<int> input_idx, objective_idx;
  for (const auto& name : schema.input_columns) input_idx.push_back(column_index(name));
  for (const auto& name : schema.objective_columns) objective_idx.push_back(column_index(name));

  std::vector<std::vector<double>> rows;
  int line_number = 1;
  while (std::getline(file, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("load_tabular: row " + std::to_string(line_number) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const std::string& cell = fields[col];
      std::size_t consumed = 0;
      double value = 0.0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          value = std::stod(cell, &consumed);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || consumed != cell.size()) {
        throw ParseError("load_tabular: non-numeric cell at row " + std::to_string(line_number) +
                         ", column '" + header[col] + "'");
      }
      row[col] = value;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("load_tabular: '" + path + "' has no data rows");

  TabularDataset dataset;
  dataset.input_names = schema.input_columns;
  dataset.objective_names = schema.objective_columns;
  dataset.directions = schema.directions;
  if (dataset.directions.empty()) {
    dataset.directions.assign(schema.objective_columns.size(), Direction::kMinimize);
  }
  if (dataset.directions.size() != schema.objective_columns.size()) {
    throw InvalidDataError("load_tabular: one direction per objective column required");
  }

  const int count = static_cast<int>(rows.size());
  dataset.inputs.resize(count, static_cast<int>(input_idx.size()));
  dataset.objectives.resize(count, static_cast<int>(objective_idx.size()));
  for (int r = 0; r < count; ++r) {
    for (std::size_t c = 0; c < input_idx.size(); ++c) {
      dataset.inputs(r, static_cast<int>(c)) = rows[static_cast<std::size_t>(r)]
                                                   [static_cast<std::size_t>(input_idx[c])];
    }
    for (std::size_t c = 0; c < objective_idx.size(); ++c) {
      dataset.objectives(r, static_cast<int>(c)) =
          rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(objective_idx[c])];
    }
  }
  return dataset;
}

}  // namespace mobopc
