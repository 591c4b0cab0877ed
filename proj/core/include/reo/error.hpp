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

#ifndef REO_ERROR_HPP_
#define REO_ERROR_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace reo {

// Base of every error raised by the library. The CLI maps IoError to exit
// status 1 and all other kinds to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Caller violated an operation's precondition (shape, argument range).
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

// Malformed feature-pack bytes. offset() is the byte position of the fault.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }
  const char* kind() const noexcept override { return "format"; }

 private:
  std::string detail_;
  std::uint64_t offset_;
};

// Well-formed container holding unusable values (NaN, Inf, non-PD matrix).
class DataError : public Error {
 public:
  using Error::Error;
  DataError(const std::string& what, std::size_t element)
      : Error(what + " (element " + std::to_string(element) + ")"),
        detail_(what),
        element_(element) {}
  std::size_t element() const noexcept { return element_; }
  const std::string& detail() const noexcept { return detail_; }
  const char* kind() const noexcept override { return "data"; }

 private:
  std::string detail_;
  std::size_t element_ = 0;
};

// Manifest or corpus-level validation failure.
class CorpusError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "corpus"; }
};

// The environment failed us: missing input file, unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

// A rank correlation is undefined because one side is entirely tied.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "undefined"; }
};

}  // namespace reo

#endif  // REO_ERROR_HPP_
