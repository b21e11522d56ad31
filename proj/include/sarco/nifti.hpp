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

// Single-file NIfTI-1 reader/writer (.nii and .nii.gz, little-endian only).

#ifndef SARCO_NIFTI_HPP
#define SARCO_NIFTI_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "sarco/io.hpp"
#include "sarco/types.hpp"

namespace sarco::nifti {

inline constexpr std::size_t kHeaderSize = 348;
inline constexpr std::size_t kSingleFileOffset = 352;

enum Datatype : int {
  kUint8 = 2,
  kInt16 = 4,
  kInt32 = 8,
  kFloat32 = 16,
  kFloat64 = 64,
};

struct Header {
  int dim_count = 3;
  Dims dims{1, 1, 1};
  Vec3 pixdim{1, 1, 1};
  double qfac = 1.0;  // pixdim[0]; sign of the third qform axis
  int datatype = kFloat32;
  int bitpix = 32;
  double scl_slope = 1.0;
  double scl_inter = 0.0;
  double vox_offset = static_cast<double>(kSingleFileOffset);
  int qform_code = 0;
  int sform_code = 0;
  /// quatern_b, quatern_c, quatern_d, qoffset_x, qoffset_y, qoffset_z
  std::array<double, 6> quaternion{0, 0, 0, 0, 0, 0};
  std::array<std::array<double, 4>, 3> srow{};
  std::array<char, 4> magic{'n', '+', '1', '\0'};
  bool has_extension = false;
};

/// Parses the 348-byte header from an uncompressed payload and checks it
/// against the payload length.
Header parse_header(std::span<const std::uint8_t> payload);

/// sform when sform_code > 0, else qform when qform_code > 0, else pixdim.
Affine resolve_affine(const Header& header);

/// Which of the three affine sources resolve_affine uses for this header.
enum class AffineSource { Sform, Qform, Pixdim };
AffineSource affine_source(const Header& header);

/// Accepts raw or gzip-compressed payloads.
CtVolume read_ct(std::span<const std::uint8_t> payload, std::string source_id = {});
/// Like read_ct, then label = (value > 0.5).
MaskVolume read_mask(std::span<const std::uint8_t> payload, std::string source_id = {});

/// float32 image, sform_code 1, qform_code 0, scl_slope 1, scl_inter 0.
Bytes write_volume(const CtVolume& volume);
/// uint8 mask, otherwise as above.
Bytes write_volume(const MaskVolume& volume);

CtVolume load_ct(const std::filesystem::path& path);
MaskVolume load_mask(const std::filesystem::path& path);
/// Gzip-compresses when the path ends in ".gz".
void save(const std::filesystem::path& path, const CtVolume& volume);
void save(const std::filesystem::path& path, const MaskVolume& volume);

}  // namespace sarco::nifti

#endif  // SARCO_NIFTI_HPP
