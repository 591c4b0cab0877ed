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

#ifndef REO_FEATUREPACK_HPP_
#define REO_FEATUREPACK_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "reo/tensor.hpp"

namespace reo {

// Feature-pack tensor file, all integers little-endian:
//
//   offset  size     field
//   0       4        magic "REOF"
//   4       2        version (u16) = 1
//   6       1        dtype (u8), 1 = float32 little-endian
//   7       1        ndim (u8), 1 or 2
//   8       4*ndim   dims (u32 each)
//   8+4*ndim         payload, product(dims) float32 values, row-major
//
// A 1-D file decodes as a single row.
inline constexpr char kFeaturePackMagic[4] = {'R', 'E', 'O', 'F'};
inline constexpr std::uint16_t kFeaturePackVersion = 1;
inline constexpr std::uint8_t kDtypeFloat32 = 1;

std::vector<std::uint8_t> EncodeTensor(const FeatureTensor& tensor);

// Throws FormatError (bad magic, version, dtype, ndim, truncated or
// oversized payload) or DataError (non-finite element, with its index).
FeatureTensor DecodeTensor(std::span<const std::uint8_t> bytes);

// Throws IoError when the file cannot be written.
void WriteTensor(const std::filesystem::path& path, const FeatureTensor& tensor);

// Throws IoError when the file cannot be read, otherwise as DecodeTensor.
FeatureTensor ReadTensor(const std::filesystem::path& path);

}  // namespace reo

#endif  // REO_FEATUREPACK_HPP_
