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

#include <benchmark/benchmark.h>

#include <span>
#include <vector>

#include "mobopc/acquisition.hpp"
#include "mobopc/constraint_prob.hpp"
#include "mobopc/gp.hpp"
#include "mobopc/rng.hpp"

namespace {

struct Fixture {
  std::vector<mobopc::GpModel> models;
  mobopc::AcquisitionContext ctx;
  std::vector<mobopc::ConeBasis> bases;

  explicit Fixture(int archive_size) {
    mobopc::Rng rng(13);
    Eigen::MatrixXd X(archive_size, 1);
    Eigen::VectorXd f0(archive_size), f1(archive_size);
    for (int i = 0; i < archive_size; ++i) {
      X(i, 0) = rng.uniform(-2.0, 2.0);
      f0[i] = X(i, 0) * X(i, 0) + 0.05 * rng.normal();
      f1[i] = (X(i, 0) - 1.0) * (X(i, 0) - 1.0) + 0.05 * rng.normal();
    }
    mobopc::KernelSpec kernel;
    kernel.signal_variance = 1.0;
    kernel.lengthscales = Eigen::VectorXd::Constant(1, 0.7);
    kernel.noise_variance = 0.01;
    models.push_back(mobopc::GpModel(kernel, X, f0));
    models.push_back(mobopc::GpModel(kernel, X, f1));

    bases.push_back(mobopc::build_basis(mobopc::PreferenceTuple({0, 1}, 2)));
    ctx.models = std::span<const mobopc::GpModel>(models);
    ctx.bases = bases;
    ctx.archive.reference = Eigen::VectorXd::Constant(2, -6.0);
    for (int i = 0; i < archive_size; ++i) {
      ctx.archive.points.push_back(
          {X.row(i).transpose(), Eigen::Vector2d(-f0[i], -f1[i]), 0.5});
    }
  }
};

void BM_Pehi(benchmark::State& state) {
  Fixture fixture(static_cast<int>(state.range(0)));
  fixture.ctx.mc_rounds = 500;
  fixture.ctx.prob_rounds = 1000;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobopc::pehi(fixture.ctx, x, mobopc::Rng(1)));
  }
}
BENCHMARK(BM_Pehi)->Arg(10)->Arg(25)->Arg(55)->Unit(benchmark::kMillisecond);

void BM_ProbSatisfies(benchmark::State& state) {
  Fixture fixture(25);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mobopc::prob_satisfies(std::span<const mobopc::GpModel>(fixture.models),
                               std::span<const mobopc::ConeBasis>(fixture.bases), x,
                               static_cast<int>(state.range(0)), mobopc::Rng(1)));
  }
}
BENCHMARK(BM_ProbSatisfies)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_GpFit(benchmark::State& state) {
  mobopc::Rng rng(5);
  const int n = static_cast<int>(state.range(0));
  Eigen::MatrixXd X(n, 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.uniform(-2.0, 2.0);
    y[i] = std::sin(2.0 * X(i, 0)) + 0.05 * rng.normal();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobopc::GpModel::fit(X, y));
  }
}
BENCHMARK(BM_GpFit)->Arg(10)->Arg(25)->Arg(55)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
