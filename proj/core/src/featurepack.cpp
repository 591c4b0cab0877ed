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

#include "reo/featurepack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "reo/error.hpp"

namespace reo {
namespace {

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
  }
}

std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint32_t CheckedDim(std::size_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError("feature pack: dimension " + std::to_string(v) +
                     " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> EncodeTensor(const FeatureTensor& tensor) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + tensor.size() * 4);
  out.insert(out.end(), std::begin(kFeaturePackMagic), std::end(kFeaturePackMagic));
  PutU16(out, kFeaturePackVersion);
  out.push_back(kDtypeFloat32);
  out.push_back(2);
  PutU32(out, CheckedDim(tensor.rows()));
  PutU32(out, CheckedDim(tensor.cols()));
  for (float v : tensor.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FeatureTensor DecodeTensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) {
    throw FormatError("feature pack: truncated header, " + std::to_string(bytes.size()) +
                          " bytes",
                      bytes.size());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kFeaturePackMagic[i])) {
      throw FormatError("feature pack: bad magic, expected \"REOF\"", i);
    }
  }
  const std::uint16_t version =
      static_cast<std::uint16_t>(bytes[4] | (static_cast<std::uint16_t>(bytes[5]) << 8));
  if (version != kFeaturePackVersion) {
    throw FormatError("feature pack: unsupported version " + std::to_string(version), 4);
  }
  if (bytes[6] != kDtypeFloat32) {
    throw FormatError("feature pack: unknown dtype code " + std::to_string(bytes[6]), 6);
  }
  const std::uint8_t ndim = bytes[7];
  if (ndim != 1 && ndim != 2) {
    throw FormatError("feature pack: unsupported ndim " + std::to_string(ndim), 7);
  }
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(ndim);
  if (bytes.size() < header) {
    throw FormatError("feature pack: truncated dims, header needs " +
                          std::to_string(header) + " bytes, file has " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  std::size_t rows = 1;
  std::size_t cols = GetU32(bytes, 8);
  if (ndim == 2) {
    rows = cols;
    cols = GetU32(bytes, 12);
  }
  const std::uint64_t expected = static_cast<std::uint64_t>(rows) * cols * 4;
  const std::uint64_t actual = bytes.size() - header;
  if (actual != expected) {
    throw FormatError("feature pack: payload length mismatch, expected " +
                          std::to_string(expected) + " bytes, got " +
                          std::to_string(actual),
                      header + std::min(actual, expected));
  }
  std::vector<float> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(GetU32(bytes, header + 4 * i));
    if (!std::isfinite(data[i])) {
      throw DataError("feature pack: non-finite payload value", i);
    }
  }
  return FeatureTensor(rows, cols, std::move(data));
}

void WriteTensor(const std::filesystem::path& path, const FeatureTensor& tensor) {
  const std::vector<std::uint8_t> bytes = EncodeTensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FeatureTensor ReadTensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  try {
    return DecodeTensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.detail(), e.offset());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.detail(), e.element());
  }
}

}  // namespace reo
