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

#include "reo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "reo/error.hpp"

namespace reo {
namespace {

void CheckSameDim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw UsageError(std::string(op) + ": dimension mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

template <typename T>
double DotImpl(std::span<const T> x, std::span<const T> y) {
  CheckSameDim(x.size(), y.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  }
  return sum;
}

template <typename T>
double CosineImpl(std::span<const T> x, std::span<const T> y) {
  CheckSameDim(x.size(), y.size(), "cosine");
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i];
    const double b = y[i];
    xy += a * b;
    xx += a * a;
    yy += b * b;
  }
  if (xx == 0.0 || yy == 0.0) return 0.0;
  return std::clamp(xy / (std::sqrt(xx) * std::sqrt(yy)), -1.0, 1.0);
}

}  // namespace

FeatureTensor::FeatureTensor(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

FeatureTensor::FeatureTensor(std::size_t rows, std::size_t cols,
                             std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw UsageError("FeatureTensor: data length " +
                     std::to_string(data_.size()) + " != " +
                     std::to_string(rows_) + " x " + std::to_string(cols_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw DataError("FeatureTensor: non-finite value", i);
    }
  }
}

FeatureTensor FeatureTensor::FromDoubles(std::size_t rows, std::size_t cols,
                                         std::span<const double> data) {
  std::vector<float> out(data.size());
  std::transform(data.begin(), data.end(), out.begin(),
                 [](double v) { return static_cast<float>(v); });
  return FeatureTensor(rows, cols, std::move(out));
}

bool BitwiseEqual(const FeatureTensor& a, const FeatureTensor& b) noexcept {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data().data(), b.data().data(),
                     a.size() * sizeof(float)) == 0;
}

double Dot(std::span<const float> x, std::span<const float> y) {
  return DotImpl(x, y);
}
double Dot(std::span<const double> x, std::span<const double> y) {
  return DotImpl(x, y);
}
double Norm(std::span<const float> x) { return std::sqrt(DotImpl(x, x)); }
double Norm(std::span<const double> x) { return std::sqrt(DotImpl(x, x)); }

double Cosine(std::span<const float> x, std::span<const float> y) {
  return CosineImpl(x, y);
}
double Cosine(std::span<const double> x, std::span<const double> y) {
  return CosineImpl(x, y);
}

std::vector<double> ToDouble(std::span<const float> x) {
  return std::vector<double>(x.begin(), x.end());
}

}  // namespace reo
