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

#include "reo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "reo/error.hpp"

namespace reo {
namespace {

void CheckSameShape(const FeatureTensor& a, const FeatureTensor& b,
                    const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError(std::string(op) + ": shape mismatch (" +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
  if (a.rows() == 0) throw UsageError(std::string(op) + ": no regions");
}

// Mean over rows of d(x_i, residual(x_i, base_i)). Extraness and omission
// are this function with the roles swapped.
double MeanProjectionDistance(const FeatureTensor& x, const FeatureTensor& base,
                              const CovarianceEstimate& cov, const char* op) {
  CheckSameShape(x, base, op);
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::vector<double> xi = ToDouble(x.row(i));
    const std::vector<double> bi = ToDouble(base.row(i));
    total += Mahalanobis(xi, OrthogonalResidual(xi, bi), cov);
  }
  return total / static_cast<double>(x.rows());
}

ReoScore Blend(const ReoScore& image, const ReoScore& reference, double w) {
  return {w * image.relevance + (1.0 - w) * reference.relevance,
          w * image.extraness + (1.0 - w) * reference.extraness,
          w * image.omission + (1.0 - w) * reference.omission,
          GroundTruthMode::kCombined};
}

ReoScore Average(std::span<const ReoScore> scores, GroundTruthMode mode) {
  ReoScore out{0.0, 0.0, 0.0, mode};
  for (const ReoScore& s : scores) {
    out.relevance += s.relevance;
    out.extraness += s.extraness;
    out.omission += s.omission;
  }
  const double n = static_cast<double>(scores.size());
  out.relevance /= n;
  out.extraness /= n;
  out.omission /= n;
  return out;
}

}  // namespace

std::string_view ToString(GroundTruthMode mode) {
  switch (mode) {
    case GroundTruthMode::kImage: return "image";
    case GroundTruthMode::kReference: return "reference";
    case GroundTruthMode::kCombined: return "combined";
  }
  return "unknown";
}

GroundTruthMode ParseGroundTruthMode(std::string_view name) {
  if (name == "image") return GroundTruthMode::kImage;
  if (name == "reference") return GroundTruthMode::kReference;
  if (name == "combined") return GroundTruthMode::kCombined;
  throw UsageError("unknown ground-truth mode '" + std::string(name) + "'");
}

std::string_view ToString(RelevanceSimilarity sim) {
  return sim == RelevanceSimilarity::kCosine ? "cosine" : "clipped";
}

RelevanceSimilarity ParseRelevanceSimilarity(std::string_view name) {
  if (name == "cosine") return RelevanceSimilarity::kCosine;
  if (name == "clipped" || name == "clipped-normalized") {
    return RelevanceSimilarity::kClippedNormalized;
  }
  throw UsageError("unknown relevance similarity '" + std::string(name) + "'");
}

void ScoringConfig::Validate() const {
  attention.Validate();
  if (!(image_weight >= 0.0 && image_weight <= 1.0)) {
    throw UsageError("image weight must lie in [0, 1]");
  }
  if (modes.empty()) throw UsageError("no ground-truth modes requested");
  if (covariance.absolute_ridge && !(*covariance.absolute_ridge >= 0.0)) {
    throw UsageError("ridge must be >= 0");
  }
  if (!(covariance.ridge_scale >= 0.0)) {
    throw UsageError("ridge scale must be >= 0");
  }
}

std::vector<double> OrthogonalResidual(std::span<const double> x,
                                       std::span<const double> base) {
  if (x.size() != base.size()) {
    throw UsageError("orthogonal residual: dimension mismatch (" +
                     std::to_string(x.size()) + " vs " +
                     std::to_string(base.size()) + ")");
  }
  std::vector<double> out(x.begin(), x.end());
  const double bb = Dot(base, base);
  if (bb == 0.0) return out;
  const double coef = Dot(x, base) / bb;
  for (std::size_t d = 0; d < out.size(); ++d) out[d] -= coef * base[d];
  return out;
}

double Relevance(const FeatureTensor& context, const FeatureTensor& truth,
                 RelevanceSimilarity sim) {
  CheckSameShape(context, truth, "relevance");
  const std::size_t n = context.rows();
  double total = 0.0;
  if (sim == RelevanceSimilarity::kCosine) {
    for (std::size_t i = 0; i < n; ++i) {
      total += Cosine(context.row(i), truth.row(i));
    }
  } else {
    // Ground-truth rows play the region role, context rows the word role.
    const Matrix s = NormalizedSimilarity(truth, context);
    for (std::size_t i = 0; i < n; ++i) total += s(i, i);
  }
  return total / static_cast<double>(n);
}

double Extraness(const FeatureTensor& context, const FeatureTensor& truth,
                 const CovarianceEstimate& cov) {
  return MeanProjectionDistance(context, truth, cov, "extraness");
}

double Omission(const FeatureTensor& context, const FeatureTensor& truth,
                const CovarianceEstimate& cov) {
  return MeanProjectionDistance(truth, context, cov, "omission");
}

ErrorVectors ComputeErrorVectors(const FeatureTensor& context,
                                 const FeatureTensor& truth) {
  CheckSameShape(context, truth, "error vectors");
  const std::size_t n = context.rows();
  const std::size_t dim = context.cols();
  std::vector<double> extra(n * dim), missing(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> a = ToDouble(context.row(i));
    const std::vector<double> g = ToDouble(truth.row(i));
    const std::vector<double> a_perp = OrthogonalResidual(a, g);
    const std::vector<double> g_perp = OrthogonalResidual(g, a);
    std::copy(a_perp.begin(), a_perp.end(), extra.begin() + i * dim);
    std::copy(g_perp.begin(), g_perp.end(), missing.begin() + i * dim);
  }
  return {FeatureTensor::FromDoubles(n, dim, extra),
          FeatureTensor::FromDoubles(n, dim, missing)};
}

ReoScore ScorePair(const FeatureTensor& context, const FeatureTensor& truth,
                   const ScoringConfig& config, GroundTruthMode mode) {
  CheckSameShape(context, truth, "score");
  const CovarianceEstimate cov =
      EstimatePairCovariance(context, truth, config.covariance);
  return {Relevance(context, truth, config.relevance_similarity),
          Extraness(context, truth, cov), Omission(context, truth, cov), mode};
}

std::vector<ReoScore> ScoreInstance(const ContextFeatures& candidate,
                                    const GroundTruthSet& truth,
                                    const ScoringConfig& config) {
  config.Validate();
  const bool wants_image =
      std::any_of(config.modes.begin(), config.modes.end(),
                  [](GroundTruthMode m) { return m != GroundTruthMode::kReference; });
  const bool wants_reference =
      std::any_of(config.modes.begin(), config.modes.end(),
                  [](GroundTruthMode m) { return m != GroundTruthMode::kImage; });
  if (wants_reference && truth.reference_contexts.empty()) {
    throw UsageError("reference mode requested but the instance has no references");
  }

  std::optional<ReoScore> image;
  if (wants_image) {
    image = ScorePair(candidate.tensor, truth.image_regions, config,
                      GroundTruthMode::kImage);
  }
  std::vector<ReoScore> per_reference;
  std::optional<ReoScore> reference;
  if (wants_reference) {
    for (const ContextFeatures& ref : truth.reference_contexts) {
      per_reference.push_back(ScorePair(candidate.tensor, ref.tensor, config,
                                        GroundTruthMode::kReference));
    }
    reference = Average(per_reference, GroundTruthMode::kReference);
  }

  std::vector<ReoScore> out;
  out.reserve(config.modes.size());
  for (GroundTruthMode mode : config.modes) {
    switch (mode) {
      case GroundTruthMode::kImage:
        out.push_back(*image);
        break;
      case GroundTruthMode::kReference:
        out.push_back(*reference);
        break;
      case GroundTruthMode::kCombined:
        if (config.combine_order == CombineOrder::kAverageThenCombine) {
          out.push_back(Blend(*image, *reference, config.image_weight));
        } else {
          std::vector<ReoScore> blended;
          for (const ReoScore& r : per_reference) {
            blended.push_back(Blend(*image, r, config.image_weight));
          }
          out.push_back(Average(blended, GroundTruthMode::kCombined));
        }
        break;
    }
  }
  return out;
}

}  // namespace reo
