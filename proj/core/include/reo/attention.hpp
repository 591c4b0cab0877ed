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

#ifndef REO_ATTENTION_HPP_
#define REO_ATTENTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "reo/tensor.hpp"

namespace reo {

struct AttentionConfig {
  // Softmax temperature over words. 0 is accepted for diagnostics and
  // yields uniform attention.
  double lambda = 9.0;

  // Throws UsageError for negative or non-finite lambda.
  void Validate() const;
};

// Which caption a set of context features was computed from.
struct ContextSource {
  enum class Kind { kCandidate, kReference };
  Kind kind = Kind::kCandidate;
  std::size_t reference_index = 0;

  static ContextSource Candidate() { return {}; }
  static ContextSource Reference(std::size_t index) {
    return {Kind::kReference, index};
  }
};

// Region-grounded context of one caption: row i is the attention-weighted
// sum of the caption's word features with respect to image region i.
struct ContextFeatures {
  FeatureTensor tensor;  // N x D
  ContextSource source;
};

// N x M matrix of clipped cosines between regions and words, each column
// scaled to unit L2 norm over regions. A column with no positive cosine is
// all zeros.
Matrix NormalizedSimilarity(const FeatureTensor& regions,
                            const FeatureTensor& words);

// Softmax of lambda * sims, with max subtraction.
std::vector<double> AttentionWeights(std::span<const double> sims,
                                     double lambda);

// a_i = sum_j alpha_ij h_j, with alpha_i = AttentionWeights(row i of the
// normalized similarity, lambda). Output is N x D, rounded to storage
// precision.
ContextFeatures ComputeContextFeatures(
    const FeatureTensor& regions, const FeatureTensor& words,
    const AttentionConfig& config,
    ContextSource source = ContextSource::Candidate());

}  // namespace reo

#endif  // REO_ATTENTION_HPP_
