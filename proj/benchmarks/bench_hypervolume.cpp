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

#include <vector>

#include "mobopc/hypervolume.hpp"
#include "mobopc/rng.hpp"

namespace {

std::vector<Eigen::VectorXd> random_points(int count, int dim, std::uint64_t seed) {
  mobopc::Rng rng(seed);
  std::vector<Eigen::VectorXd> points;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd p(dim);
    for (int d = 0; d < dim; ++d) p[d] = rng.uniform();
    points.push_back(p);
  }
  return points;
}

void BM_Hypervolume(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const auto points = random_points(count, dim, 42);
  const Eigen::VectorXd z = Eigen::VectorXd::Constant(dim, -0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobopc::hypervolume(points, z));
  }
}
BENCHMARK(BM_Hypervolume)
    ->Args({10, 2})
    ->Args({30, 2})
    ->Args({60, 2})
    ->Args({10, 3})
    ->Args({30, 3});

void BM_WeightedExpectedHv(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  mobopc::Rng rng(7);
  mobopc::ParetoArchive archive;
  archive.reference = Eigen::VectorXd::Constant(dim, -0.1);
  for (const auto& y : random_points(count, dim, 42)) {
    archive.points.push_back({Eigen::VectorXd::Zero(1), y, rng.uniform()});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobopc::weighted_expected_hv(archive));
  }
}
BENCHMARK(BM_WeightedExpectedHv)->Args({10, 2})->Args({30, 2})->Args({10, 3});

void BM_DominantSubset(benchmark::State& state) {
  const auto points = random_points(static_cast<int>(state.range(0)), 3, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mobopc::dominant_subset(points));
  }
}
BENCHMARK(BM_DominantSubset)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
