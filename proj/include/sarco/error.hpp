// Copyright 2026 The sarcoscan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SARCO_ERROR_HPP
#define SARCO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sarco {

// Numeric values are part of the C ABI (see sarco.h) and must not change.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  IoError = 2,
  BadMagic = 10,
  BadHeader = 11,
  UnsupportedDatatype = 12,
  TruncatedPayload = 13,
  NonFiniteAfterScaling = 14,
  DegenerateAffine = 15,
  DimsOverflow = 16,
  MissingPreamble = 20,
  CompressedTransferSyntax = 21,
  MissingRequiredTag = 22,
  PixelDataLengthMismatch = 23,
  MixedSeries = 24,
  NonUniformSliceSpacing = 25,
  DuplicatePosition = 26,
  InsufficientSlices = 27,
  NoInput = 28,
  AmbiguousOrientation = 30,
  TargetExceedsDims = 31,
  TargetBelowDims = 32,
  EmptyMask = 40,
  MultipleAnnotatedSlices = 41,
  GeometryMismatch = 42,
  EmptySlice = 43,
  DimsMismatch = 50,
  NonPositiveGroundTruth = 51,
  EmptyInput = 52,
  SingleClassInput = 53,
  ConfigError = 60,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sarco

#endif  // SARCO_ERROR_HPP
