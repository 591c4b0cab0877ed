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

#ifndef REO_MANIFEST_HPP_
#define REO_MANIFEST_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reo/harness.hpp"
#include "reo/scoring.hpp"
#include "reo/tensor.hpp"

namespace reo {

struct RatingJudgment {
  double rating = 0.0;
  double scale_min = 1.0;
  double scale_max = 5.0;
};

// One side of a pairwise comparison.
struct PairJudgment {
  std::string pair_id;
  PairSide position = PairSide::kFirst;
  PairCategory category = PairCategory::kHC;
  PairSide human_choice = PairSide::kFirst;
};

using Judgment = std::variant<std::monostate, RatingJudgment, PairJudgment>;

// Known corruption applied by the synthetic generator.
struct Corruption {
  std::string kind;
  int level = 0;
};

// One JSON-lines record. Paths are as written in the file (relative to the
// manifest's directory unless absolute).
struct InstanceManifest {
  std::string instance_id;
  std::filesystem::path image_tensor;
  std::filesystem::path candidate_words;
  std::vector<std::filesystem::path> reference_words;
  Judgment judgment;
  std::optional<std::filesystem::path> true_extra;
  std::optional<std::filesystem::path> true_missing;
  std::optional<Corruption> corruption;
  std::optional<std::string> checkpoint;
};

// Syntax and field validation only; no files are touched. Blank lines are
// skipped. Errors cite the 1-based line number.
std::vector<InstanceManifest> ParseManifest(std::istream& in);

// Inverse of ParseManifest for one record (no trailing newline).
std::string ManifestLine(const InstanceManifest& record);

struct LoadedInstance {
  InstanceManifest manifest;
  std::shared_ptr<const FeatureTensor> image;
  std::shared_ptr<const FeatureTensor> candidate;
  std::vector<std::shared_ptr<const FeatureTensor>> references;
  std::shared_ptr<const FeatureTensor> true_extra;    // may be null
  std::shared_ptr<const FeatureTensor> true_missing;  // may be null
};

struct Corpus {
  std::filesystem::path root;
  std::vector<LoadedInstance> instances;
  std::size_t dim = 0;  // 0 for an empty corpus
};

// Parses, loads every tensor (shared by path, parsed on up to `jobs`
// threads) and validates the corpus as a whole: unique ids, existing and
// parseable tensors, one D across the corpus, N x D true-error tensors,
// ratings inside their scale, complete pairs. Throws CorpusError, or
// IoError when the manifest itself cannot be read.
Corpus LoadManifest(const std::filesystem::path& path, unsigned jobs = 1);

std::vector<ScoringInput> ToScoringInputs(const Corpus& corpus);

}  // namespace reo

#endif  // REO_MANIFEST_HPP_
