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

#include "reo/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "reo/error.hpp"

namespace reo {

void ParallelFor(std::size_t count, unsigned jobs,
                 const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  const auto guarded = [&](std::size_t i) {
    try {
      task(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          guarded(i);
        }
      });
    }
  }  // jthreads join here

  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<ReoScore> ScoreFeatures(const FeatureTensor& image,
                                    const FeatureTensor& candidate_words,
                                    std::span<const FeatureTensor* const> reference_words,
                                    const ScoringConfig& config) {
  config.Validate();
  const bool wants_reference =
      std::any_of(config.modes.begin(), config.modes.end(),
                  [](GroundTruthMode m) { return m != GroundTruthMode::kImage; });

  GroundTruthSet truth{image, {}};
  if (wants_reference) {
    if (reference_words.empty()) {
      throw UsageError("reference mode requested but the instance has no references");
    }
    truth.reference_contexts.reserve(reference_words.size());
    for (std::size_t r = 0; r < reference_words.size(); ++r) {
      truth.reference_contexts.push_back(ComputeContextFeatures(
          image, *reference_words[r], config.attention, ContextSource::Reference(r)));
    }
  }
  const ContextFeatures candidate =
      ComputeContextFeatures(image, candidate_words, config.attention);
  return ScoreInstance(candidate, truth, config);
}

std::vector<InstanceScores> ScoreBatch(std::span<const ScoringInput> inputs,
                                       const ScoringConfig& config,
                                       unsigned jobs) {
  config.Validate();
  std::vector<InstanceScores> out(inputs.size());
  ParallelFor(inputs.size(), jobs, [&](std::size_t i) {
    const ScoringInput& in = inputs[i];
    if (!in.image || !in.candidate_words) {
      throw UsageError("instance '" + in.instance_id + "': missing image or candidate tensor");
    }
    std::vector<const FeatureTensor*> refs;
    refs.reserve(in.reference_words.size());
    for (const auto& r : in.reference_words) refs.push_back(r.get());
    try {
      out[i] = {in.instance_id,
                ScoreFeatures(*in.image, *in.candidate_words, refs, config)};
    } catch (const UsageError& e) {
      throw UsageError("instance '" + in.instance_id + "': " + e.what());
    }
  });
  return out;
}

}  // namespace reo
