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

#ifndef REO_SCORING_HPP_
#define REO_SCORING_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "reo/metrics.hpp"
#include "reo/tensor.hpp"

namespace reo {

// Raw features of one candidate caption and its ground truth.
struct ScoringInput {
  std::string instance_id;
  std::shared_ptr<const FeatureTensor> image;            // N x D regions
  std::shared_ptr<const FeatureTensor> candidate_words;  // M x D
  std::vector<std::shared_ptr<const FeatureTensor>> reference_words;
};

struct InstanceScores {
  std::string instance_id;
  std::vector<ReoScore> scores;  // one per requested mode, in config order
};

// Attention over candidate and reference words, then ScoreInstance. Only
// computes reference contexts when a reference-based mode is requested.
std::vector<ReoScore> ScoreFeatures(const FeatureTensor& image,
                                    const FeatureTensor& candidate_words,
                                    std::span<const FeatureTensor* const> reference_words,
                                    const ScoringConfig& config);

// Scores every input with up to `jobs` worker threads. Results are in input
// order and identical for any `jobs`. The first failing input (in input
// order) is rethrown after all workers finish.
std::vector<InstanceScores> ScoreBatch(std::span<const ScoringInput> inputs,
                                       const ScoringConfig& config,
                                       unsigned jobs = 1);

// Runs task(i) for i in [0, count) on a bounded pool of std::jthreads.
// Exceptions are collected per index; the lowest failing index is rethrown.
void ParallelFor(std::size_t count, unsigned jobs,
                 const std::function<void(std::size_t)>& task);

}  // namespace reo

#endif  // REO_SCORING_HPP_
