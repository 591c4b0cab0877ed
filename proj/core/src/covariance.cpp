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

#include "reo/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reo/error.hpp"

namespace reo {
namespace {

using RowList = std::vector<std::span<const float>>;

RowList StackRows(std::initializer_list<const FeatureTensor*> tensors) {
  RowList rows;
  for (const FeatureTensor* t : tensors) {
    for (std::size_t i = 0; i < t->rows(); ++i) rows.push_back(t->row(i));
  }
  return rows;
}

std::vector<double> Mean(const RowList& rows, std::size_t dim) {
  std::vector<double> mean(dim, 0.0);
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < dim; ++d) mean[d] += r[d];
  }
  for (double& m : mean) m /= static_cast<double>(rows.size());
  return mean;
}

std::vector<double> UnbiasedVariance(const RowList& rows, std::size_t dim) {
  const std::vector<double> mean = Mean(rows, dim);
  std::vector<double> var(dim, 0.0);
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = r[d] - mean[d];
      var[d] += c * c;
    }
  }
  for (double& v : var) v /= static_cast<double>(rows.size() - 1);
  return var;
}

Matrix UnbiasedCovariance(const RowList& rows, std::size_t dim) {
  const std::vector<double> mean = Mean(rows, dim);
  Matrix cov(dim, dim);
  std::vector<double> centered(dim);
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < dim; ++d) centered[d] = r[d] - mean[d];
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) cov(i, j) += centered[i] * centered[j];
    }
  }
  const double denom = static_cast<double>(rows.size() - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cov(i, j) /= denom;
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

CovarianceEstimate FromRows(const RowList& rows, std::size_t dim,
                            CovarianceKind kind, double ridge,
                            double shrinkage, bool* fell_back) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw UsageError("covariance: ridge must be finite and >= 0");
  }
  if (!(shrinkage >= 0.0 && shrinkage <= 1.0)) {
    throw UsageError("covariance: shrinkage must lie in [0, 1]");
  }
  *fell_back = false;
  if (kind == CovarianceKind::kIdentity) return CovarianceEstimate::Identity(dim);
  if (rows.size() < 2) {
    *fell_back = true;
    return CovarianceEstimate::Identity(dim);
  }
  if (kind == CovarianceKind::kDiagonal) {
    std::vector<double> var = UnbiasedVariance(rows, dim);
    for (double& v : var) v += ridge;
    return CovarianceEstimate::Diagonal(std::move(var), ridge);
  }
  Matrix cov = UnbiasedCovariance(rows, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (i != j) cov(i, j) *= (1.0 - shrinkage);
    }
    cov(i, i) += ridge;
  }
  return CovarianceEstimate::Full(cov, ridge);
}

}  // namespace

std::string_view ToString(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::kIdentity: return "identity";
    case CovarianceKind::kDiagonal: return "diagonal";
    case CovarianceKind::kShrinkageFull: return "shrinkage";
  }
  return "unknown";
}

CovarianceKind ParseCovarianceKind(std::string_view name) {
  if (name == "identity") return CovarianceKind::kIdentity;
  if (name == "diagonal") return CovarianceKind::kDiagonal;
  if (name == "shrinkage" || name == "shrinkage-full") {
    return CovarianceKind::kShrinkageFull;
  }
  throw UsageError("unknown covariance kind '" + std::string(name) + "'");
}

CovarianceEstimate CovarianceEstimate::Identity(std::size_t dim) {
  CovarianceEstimate s;
  s.kind_ = CovarianceKind::kIdentity;
  s.dim_ = dim;
  return s;
}

CovarianceEstimate CovarianceEstimate::Diagonal(std::vector<double> variances,
                                                double ridge) {
  for (std::size_t d = 0; d < variances.size(); ++d) {
    if (!(variances[d] > 0.0) || !std::isfinite(variances[d])) {
      throw DataError("covariance is not positive definite; raise the ridge", d);
    }
  }
  CovarianceEstimate s;
  s.kind_ = CovarianceKind::kDiagonal;
  s.dim_ = variances.size();
  s.ridge_ = ridge;
  s.diagonal_ = std::move(variances);
  return s;
}

CovarianceEstimate CovarianceEstimate::Full(const Matrix& dense, double ridge) {
  if (dense.rows != dense.cols) {
    throw UsageError("covariance: dense matrix must be square");
  }
  const std::size_t n = dense.rows;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = dense(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw DataError("covariance is not positive definite; raise the ridge", j);
    }
    l(j, j) = std::sqrt(pivot);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = dense(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  CovarianceEstimate s;
  s.kind_ = CovarianceKind::kShrinkageFull;
  s.dim_ = n;
  s.ridge_ = ridge;
  s.cholesky_ = std::move(l);
  return s;
}

double CovarianceEstimate::InverseQuadraticForm(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw UsageError("mahalanobis: vector dimension " + std::to_string(x.size()) +
                     " != covariance dimension " + std::to_string(dim_));
  }
  double sum = 0.0;
  switch (kind_) {
    case CovarianceKind::kIdentity:
      for (double v : x) sum += v * v;
      break;
    case CovarianceKind::kDiagonal:
      for (std::size_t d = 0; d < dim_; ++d) sum += x[d] * x[d] / diagonal_[d];
      break;
    case CovarianceKind::kShrinkageFull: {
      // Forward substitution L y = x; x^T S^-1 x = |y|^2.
      std::vector<double> y(dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        double v = x[i];
        for (std::size_t k = 0; k < i; ++k) v -= cholesky_(i, k) * y[k];
        y[i] = v / cholesky_(i, i);
        sum += y[i] * y[i];
      }
      break;
    }
  }
  return sum;
}

Matrix CovarianceEstimate::Dense() const {
  Matrix s(dim_, dim_);
  switch (kind_) {
    case CovarianceKind::kIdentity:
      for (std::size_t i = 0; i < dim_; ++i) s(i, i) = 1.0;
      break;
    case CovarianceKind::kDiagonal:
      for (std::size_t i = 0; i < dim_; ++i) s(i, i) = diagonal_[i];
      break;
    case CovarianceKind::kShrinkageFull:
      for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
          double v = 0.0;
          for (std::size_t k = 0; k <= std::min(i, j); ++k) {
            v += cholesky_(i, k) * cholesky_(j, k);
          }
          s(i, j) = v;
        }
      }
      break;
  }
  return s;
}

CovarianceEstimate EstimateCovariance(const FeatureTensor& samples,
                                      CovarianceKind kind, double ridge,
                                      double shrinkage) {
  bool fell_back = false;
  CovarianceEstimate s = FromRows(StackRows({&samples}), samples.cols(), kind,
                                  ridge, shrinkage, &fell_back);
  if (fell_back) {
    CovarianceEstimate id = CovarianceEstimate::Identity(samples.cols());
    id.fallback_ = true;
    return id;
  }
  return s;
}

CovarianceEstimate EstimatePairCovariance(const FeatureTensor& a,
                                          const FeatureTensor& b,
                                          const CovariancePolicy& policy) {
  if (a.cols() != b.cols()) {
    throw UsageError("covariance: sample dimension mismatch");
  }
  const RowList rows = StackRows({&a, &b});
  double ridge = 0.0;
  if (policy.absolute_ridge) {
    ridge = *policy.absolute_ridge;
  } else if (policy.kind != CovarianceKind::kIdentity && rows.size() >= 2) {
    const std::vector<double> var = UnbiasedVariance(rows, a.cols());
    double mean = 0.0;
    for (double v : var) mean += v;
    if (!var.empty()) mean /= static_cast<double>(var.size());
    ridge = policy.ridge_scale * (mean + 1e-12);
  }
  bool fell_back = false;
  CovarianceEstimate s =
      FromRows(rows, a.cols(), policy.kind, ridge, policy.shrinkage, &fell_back);
  if (fell_back) {
    CovarianceEstimate id = CovarianceEstimate::Identity(a.cols());
    id.fallback_ = true;
    return id;
  }
  return s;
}

double Mahalanobis(std::span<const double> p, std::span<const double> q,
                   const CovarianceEstimate& cov) {
  if (p.size() != q.size()) {
    throw UsageError("mahalanobis: dimension mismatch (" +
                     std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()) + ")");
  }
  std::vector<double> diff(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diff[i] = p[i] - q[i];
  return std::sqrt(cov.InverseQuadraticForm(diff));
}

}  // namespace reo
