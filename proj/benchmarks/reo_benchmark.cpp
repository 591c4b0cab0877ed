/* Copyright 2026 The REO Evaluation Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <memory>
#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "reo/attention.hpp"
#include "reo/harness.hpp"
#include "reo/metrics.hpp"
#include "reo/scoring.hpp"

namespace {

reo::FeatureTensor RandomTensor(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<float> n;
  std::vector<float> v(rows * cols);
  for (float& x : v) x = n(rng);
  return reo::FeatureTensor(rows, cols, std::move(v));
}

void BM_ContextFeatures(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto regions = RandomTensor(rng, 36, dim);
  const auto words = RandomTensor(rng, 12, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reo::ComputeContextFeatures(regions, words, reo::AttentionConfig{}));
  }
}
BENCHMARK(BM_ContextFeatures)->Arg(64)->Arg(1024);

void BM_ScoreInstance(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto kind = static_cast<reo::CovarianceKind>(state.range(1));
  const auto image = RandomTensor(rng, 36, dim);
  const auto cand = RandomTensor(rng, 12, dim);
  std::vector<reo::FeatureTensor> refs;
  for (int r = 0; r < 5; ++r) refs.push_back(RandomTensor(rng, 12, dim));
  std::vector<const reo::FeatureTensor*> ptrs;
  for (const auto& r : refs) ptrs.push_back(&r);
  reo::ScoringConfig cfg;
  cfg.covariance.kind = kind;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reo::ScoreFeatures(image, cand, ptrs, cfg));
  }
}
BENCHMARK(BM_ScoreInstance)
    ->Args({64, static_cast<int>(reo::CovarianceKind::kDiagonal)})
    ->Args({1024, static_cast<int>(reo::CovarianceKind::kDiagonal)})
    ->Args({64, static_cast<int>(reo::CovarianceKind::kShrinkageFull)})
    ->Unit(benchmark::kMicrosecond);

void BM_KendallTau(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> rating(1, 5);
  std::normal_distribution<double> score;
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  std::vector<double> ys(xs.size());
  for (auto& x : xs) x = score(rng);
  for (auto& y : ys) y = rating(rng);
  for (auto _ : state) benchmark::DoNotOptimize(reo::KendallTau(xs, ys));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(8)->Range(64, 1 << 18)->Complexity(benchmark::oNLogN);

}  // namespace

BENCHMARK_MAIN();
