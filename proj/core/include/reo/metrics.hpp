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

#ifndef REO_METRICS_HPP_
#define REO_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "reo/attention.hpp"
#include "reo/covariance.hpp"
#include "reo/tensor.hpp"

namespace reo {

// What the candidate is compared against.
enum class GroundTruthMode { kImage, kReference, kCombined };

std::string_view ToString(GroundTruthMode mode);
GroundTruthMode ParseGroundTruthMode(std::string_view name);

enum class RelevanceSimilarity {
  kCosine,             // plain cosine of a_i and g_i
  kClippedNormalized,  // clipped cosine normalized over regions, as in attention
};

std::string_view ToString(RelevanceSimilarity sim);
RelevanceSimilarity ParseRelevanceSimilarity(std::string_view name);

// Larger is better on every axis. Extraness and omission are raw
// Mahalanobis magnitudes and are not bounded above.
struct ReoScore {
  double relevance = 0.0;
  double extraness = 0.0;
  double omission = 0.0;
  GroundTruthMode mode = GroundTruthMode::kImage;
};

// Per-region residuals: extra row i is a_i with its g_i component removed,
// missing row i is g_i with its a_i component removed.
struct ErrorVectors {
  FeatureTensor extra;
  FeatureTensor missing;
};

// An image's ground truth: region features and the context features of
// each reference caption, all N x D.
struct GroundTruthSet {
  FeatureTensor image_regions;
  std::vector<ContextFeatures> reference_contexts;
};

// Order in which reference averaging and image/reference combination are
// applied. Both are linear, so the results agree up to rounding.
enum class CombineOrder { kAverageThenCombine, kCombineThenAverage };

struct ScoringConfig {
  AttentionConfig attention;
  CovariancePolicy covariance;
  RelevanceSimilarity relevance_similarity = RelevanceSimilarity::kCosine;
  // Weight of the image-mode score in combined mode; references get 1 - w.
  double image_weight = 0.5;
  CombineOrder combine_order = CombineOrder::kAverageThenCombine;
  std::vector<GroundTruthMode> modes = {GroundTruthMode::kImage,
                                        GroundTruthMode::kReference,
                                        GroundTruthMode::kCombined};

  void Validate() const;
};

// x - (x.base / |base|^2) base; x unchanged when base is zero.
std::vector<double> OrthogonalResidual(std::span<const double> x,
                                       std::span<const double> base);

double Relevance(const FeatureTensor& context, const FeatureTensor& truth,
                 RelevanceSimilarity sim = RelevanceSimilarity::kCosine);

// Mean over regions of d(a_i, residual(a_i, g_i)).
double Extraness(const FeatureTensor& context, const FeatureTensor& truth,
                 const CovarianceEstimate& cov);

// Mean over regions of d(g_i, residual(g_i, a_i)). Exactly
// Extraness(truth, context, cov).
double Omission(const FeatureTensor& context, const FeatureTensor& truth,
                const CovarianceEstimate& cov);

ErrorVectors ComputeErrorVectors(const FeatureTensor& context,
                                 const FeatureTensor& truth);

// All three axes against one ground-truth tensor, with S estimated from
// the stacked rows of the pair.
ReoScore ScorePair(const FeatureTensor& context, const FeatureTensor& truth,
                   const ScoringConfig& config,
                   GroundTruthMode mode = GroundTruthMode::kImage);

// Scores one candidate in every mode of config.modes, in that order.
// Reference and combined modes need at least one reference (UsageError).
std::vector<ReoScore> ScoreInstance(const ContextFeatures& candidate,
                                    const GroundTruthSet& truth,
                                    const ScoringConfig& config);

}  // namespace reo

#endif  // REO_METRICS_HPP_
