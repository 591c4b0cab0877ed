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

#ifndef REO_COVARIANCE_HPP_
#define REO_COVARIANCE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "reo/tensor.hpp"

namespace reo {

enum class CovarianceKind { kIdentity, kDiagonal, kShrinkageFull };

std::string_view ToString(CovarianceKind kind);
// Accepts "identity", "diagonal", "shrinkage" / "shrinkage-full".
CovarianceKind ParseCovarianceKind(std::string_view name);

struct CovariancePolicy;

// A symmetric positive definite S, stored in a form that evaluates
// x -> x^T S^-1 x without forming S^-1: nothing for identity, the variances
// for diagonal, the lower Cholesky factor for full.
class CovarianceEstimate {
 public:
  static CovarianceEstimate Identity(std::size_t dim);
  // Throws DataError unless every variance is finite and > 0.
  static CovarianceEstimate Diagonal(std::vector<double> variances,
                                     double ridge = 0.0);
  // `dense` is dim x dim and symmetric. Throws DataError when the Cholesky
  // factorization finds a non-positive pivot.
  static CovarianceEstimate Full(const Matrix& dense, double ridge = 0.0);

  std::size_t dim() const noexcept { return dim_; }
  CovarianceKind kind() const noexcept { return kind_; }
  double ridge() const noexcept { return ridge_; }

  // Set when a non-identity estimate was requested from fewer than two
  // samples and identity was substituted.
  bool fell_back_to_identity() const noexcept { return fallback_; }

  // x^T S^-1 x.
  double InverseQuadraticForm(std::span<const double> x) const;

  // S itself as a dense matrix, for inspection and tests.
  Matrix Dense() const;

 private:
  friend CovarianceEstimate EstimateCovariance(const FeatureTensor&,
                                               CovarianceKind, double, double);
  friend CovarianceEstimate EstimatePairCovariance(const FeatureTensor&,
                                                   const FeatureTensor&,
                                                   const CovariancePolicy&);

  CovarianceEstimate() = default;

  CovarianceKind kind_ = CovarianceKind::kIdentity;
  std::size_t dim_ = 0;
  double ridge_ = 0.0;
  bool fallback_ = false;
  std::vector<double> diagonal_;  // kDiagonal: variances
  Matrix cholesky_;               // kShrinkageFull: lower factor L, S = L L^T
};

// How scoring builds S for each (candidate, ground truth) pair.
struct CovariancePolicy {
  CovarianceKind kind = CovarianceKind::kDiagonal;
  // ridge = ridge_scale * (mean diagonal variance + 1e-12), unless
  // `absolute_ridge` is set.
  double ridge_scale = 1e-3;
  std::optional<double> absolute_ridge;
  // Weight of diag(sample covariance) in the shrinkage-full blend.
  double shrinkage = 0.5;
};

// Estimates S from the rows of `samples` (K x D). Identity ignores the data.
// Diagonal uses unbiased per-dimension variance plus ridge. Shrinkage-full
// uses (1 - shrinkage) * cov + shrinkage * diag(cov) + ridge * I.
// K < 2 with a non-identity kind falls back to identity and sets the flag.
CovarianceEstimate EstimateCovariance(const FeatureTensor& samples,
                                      CovarianceKind kind, double ridge,
                                      double shrinkage = 0.5);

// Pair-local estimate from the stacked rows of `a` and `b` (same D), with
// the ridge resolved from `policy`.
CovarianceEstimate EstimatePairCovariance(const FeatureTensor& a,
                                          const FeatureTensor& b,
                                          const CovariancePolicy& policy);

// sqrt((p - q)^T S^-1 (p - q)).
double Mahalanobis(std::span<const double> p, std::span<const double> q,
                   const CovarianceEstimate& cov);

}  // namespace reo

#endif  // REO_COVARIANCE_HPP_
