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

#ifndef REO_SYNTHETIC_HPP_
#define REO_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "reo/manifest.hpp"
#include "reo/scoring.hpp"
#include "reo/tensor.hpp"

namespace reo {

enum class CorruptionSchedule {
  kExtra,     // level l appends l * noise_words_per_level unrelated words
  kDeletion,  // level l drops l concept words
};

std::string_view ToString(CorruptionSchedule schedule);
CorruptionSchedule ParseCorruptionSchedule(std::string_view name);

// A scene is a handful of unit-norm concept vectors. Each image region is a
// noisy copy of one concept; each reference caption has one word per
// concept. The clean candidate is reference 0, corrupted per the schedule.
struct SyntheticConfig {
  std::uint64_t seed = 7;
  std::size_t scenes = 100;
  int levels = 5;
  std::size_t regions = 36;
  std::size_t dim = 64;
  std::size_t concepts = 6;
  std::size_t references = 3;
  double region_noise = 0.3;
  double paraphrase_noise = 0.2;
  std::size_t noise_words_per_level = 2;
  CorruptionSchedule schedule = CorruptionSchedule::kExtra;
  // Emit two candidates per scene at distinct levels as a labelled pair
  // (the less corrupted one is the human choice) instead of every level.
  bool pairs = false;

  void Validate() const;
};

struct SyntheticInstance {
  std::string instance_id;
  std::size_t scene = 0;
  int level = 0;
  std::shared_ptr<const FeatureTensor> image;
  std::shared_ptr<const FeatureTensor> candidate_words;
  std::vector<std::shared_ptr<const FeatureTensor>> reference_words;
  Judgment judgment;  // rating 5 - 4 * level / (levels - 1), or pair side
};

// Deterministic in the config: the same seed gives bit-identical tensors.
std::vector<SyntheticInstance> GenerateSynthetic(const SyntheticConfig& config);

std::vector<ScoringInput> ToScoringInputs(std::span<const SyntheticInstance> instances);

// Writes tensors under dir/tensors/ and dir/manifest.jsonl; returns the
// manifest path. Throws IoError on write failure.
std::filesystem::path WriteSyntheticCorpus(const std::filesystem::path& dir,
                                           const SyntheticConfig& config);

}  // namespace reo

#endif  // REO_SYNTHETIC_HPP_
