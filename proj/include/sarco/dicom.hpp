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

// Minimal reader for uncompressed single-frame CT DICOM slices and series
// assembly into a volume. Only little-endian transfer syntaxes are handled.

#ifndef SARCO_DICOM_HPP
#define SARCO_DICOM_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sarco/types.hpp"

namespace sarco::dicom {

inline constexpr const char* kImplicitVRLittleEndian = "1.2.840.10008.1.2";
inline constexpr const char* kExplicitVRLittleEndian = "1.2.840.10008.1.2.1";

struct Slice {
  int rows = 0;
  int cols = 0;
  /// (0028,0030): spacing between rows, then between columns, in mm.
  double row_spacing = 1.0;
  double col_spacing = 1.0;
  Vec3 image_position{0, 0, 0};
  /// Row direction cosine (x,y,z) followed by column direction cosine.
  std::array<double, 6> image_orientation{1, 0, 0, 0, 1, 0};
  double rescale_slope = 1.0;
  double rescale_intercept = 0.0;
  bool rescale_defaulted = false;
  std::vector<std::int32_t> stored_pixels;  // row-major, rows * cols
  int instance_number = 0;
  std::string series_uid;
  std::string source;

  Vec3 row_cosine() const { return {image_orientation[0], image_orientation[1], image_orientation[2]}; }
  Vec3 col_cosine() const { return {image_orientation[3], image_orientation[4], image_orientation[5]}; }
  Vec3 normal() const;
};

Slice parse_slice(std::span<const std::uint8_t> payload, std::string source = {});

/// Sorts slices along the slice normal and builds a HU volume with dims
/// (cols, rows, n). The affine is expressed in RAS+ world coordinates
/// (DICOM patient x and y negated).
CtVolume assemble_series(std::vector<Slice> slices);

struct SeriesResult {
  CtVolume volume;
  std::size_t slice_count = 0;
  double slice_step_mm = 0.0;
  std::vector<std::string> warnings;
};

/// Parses every regular file in `dir` (name order) and assembles the series.
/// Parse failures are reported together, one line per file.
SeriesResult load_series(const std::filesystem::path& dir);

}  // namespace sarco::dicom

#endif  // SARCO_DICOM_HPP
