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

#ifndef REO_TENSOR_HPP_
#define REO_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace reo {

// Dense row-major 2-D array of 32-bit floats. Every element is finite; the
// constructor rejects NaN and Inf so nothing downstream has to re-check.
// Values are immutable after construction.
class FeatureTensor {
 public:
  FeatureTensor() = default;

  // rows x cols zeros.
  FeatureTensor(std::size_t rows, std::size_t cols);

  // Takes ownership of row-major `data`. Throws UsageError when the length
  // is not rows * cols and DataError naming the first non-finite element.
  FeatureTensor(std::size_t rows, std::size_t cols, std::vector<float> data);

  // Rounds 64-bit working values to storage precision.
  static FeatureTensor FromDoubles(std::size_t rows, std::size_t cols,
                                   std::span<const double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> row(std::size_t i) const noexcept {
    return std::span<const float>(data_).subspan(i * cols_, cols_);
  }
  float operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  // Value equality (+0.0 == -0.0). Use BitwiseEqual for byte identity.
  friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

bool BitwiseEqual(const FeatureTensor& a, const FeatureTensor& b) noexcept;

// Row-major matrix of 64-bit working values (similarity matrices, dense
// covariance). Not constrained to be finite.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * cols, cols);
  }
};

// Vector kernels. Storage may be 32-bit; accumulation is always 64-bit.
// Mismatched dimensions throw UsageError.
double Dot(std::span<const float> x, std::span<const float> y);
double Dot(std::span<const double> x, std::span<const double> y);
double Norm(std::span<const float> x);
double Norm(std::span<const double> x);

// x.y / (|x||y|), or 0 when either norm is 0.
double Cosine(std::span<const float> x, std::span<const float> y);
double Cosine(std::span<const double> x, std::span<const double> y);

std::vector<double> ToDouble(std::span<const float> x);

}  // namespace reo

#endif  // REO_TENSOR_HPP_
