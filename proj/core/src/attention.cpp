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

#include "reo/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reo/error.hpp"

namespace reo {

void AttentionConfig::Validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw UsageError("attention: lambda must be finite and >= 0, got " +
                     std::to_string(lambda));
  }
}

Matrix NormalizedSimilarity(const FeatureTensor& regions,
                            const FeatureTensor& words) {
  if (regions.cols() != words.cols()) {
    throw UsageError("normalized similarity: region dimension " +
                     std::to_string(regions.cols()) + " != word dimension " +
                     std::to_string(words.cols()));
  }
  if (regions.rows() == 0 || words.rows() == 0) {
    throw UsageError("normalized similarity: need at least one region and one word");
  }
  const std::size_t n = regions.rows();
  const std::size_t m = words.rows();

  std::vector<double> region_norm(n), word_norm(m);
  for (std::size_t i = 0; i < n; ++i) region_norm[i] = Norm(regions.row(i));
  for (std::size_t j = 0; j < m; ++j) word_norm[j] = Norm(words.row(j));

  Matrix sim(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double denom = region_norm[i] * word_norm[j];
      if (denom == 0.0) continue;
      const double c = Dot(regions.row(i), words.row(j)) / denom;
      sim(i, j) = std::max(0.0, std::min(c, 1.0));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) sq += sim(i, j) * sim(i, j);
    if (sq == 0.0) continue;
    const double scale = 1.0 / std::sqrt(sq);
    for (std::size_t i = 0; i < n; ++i) sim(i, j) *= scale;
  }
  return sim;
}

std::vector<double> AttentionWeights(std::span<const double> sims,
                                     double lambda) {
  if (sims.empty()) throw UsageError("attention weights: empty similarity vector");
  const double peak = *std::max_element(sims.begin(), sims.end());
  std::vector<double> w(sims.size());
  double total = 0.0;
  for (std::size_t j = 0; j < sims.size(); ++j) {
    w[j] = std::exp(lambda * (sims[j] - peak));
    total += w[j];
  }
  for (double& v : w) v /= total;
  return w;
}

ContextFeatures ComputeContextFeatures(const FeatureTensor& regions,
                                       const FeatureTensor& words,
                                       const AttentionConfig& config,
                                       ContextSource source) {
  config.Validate();
  const Matrix sim = NormalizedSimilarity(regions, words);
  const std::size_t n = regions.rows();
  const std::size_t m = words.rows();
  const std::size_t dim = words.cols();

  std::vector<double> out(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> alpha = AttentionWeights(sim.row(i), config.lambda);
    double* a = out.data() + i * dim;
    for (std::size_t j = 0; j < m; ++j) {
      const auto h = words.row(j);
      for (std::size_t d = 0; d < dim; ++d) a[d] += alpha[j] * h[d];
    }
  }
  return {FeatureTensor::FromDoubles(n, dim, out), source};
}

}  // namespace reo
