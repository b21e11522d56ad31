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

#include "sarco/nifti.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "bytes.hpp"
#include "sarco/error.hpp"
#include "sarco/geometry.hpp"

namespace sarco::nifti {

using detail::load_le;
using detail::store_le;

namespace {

// Field offsets in the NIfTI-1 header.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffRegular = 38;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffXyztUnits = 123;
constexpr std::size_t kOffQformCode = 252;
constexpr std::size_t kOffSformCode = 254;
constexpr std::size_t kOffQuatern = 256;
constexpr std::size_t kOffSrow = 280;
constexpr std::size_t kOffMagic = 344;
constexpr std::size_t kOffExtension = 348;

constexpr int kMaxDim = 32767;

int bytes_per_sample(int datatype) {
  switch (datatype) {
    case kUint8: return 1;
    case kInt16: return 2;
    case kInt32: return 4;
    case kFloat32: return 4;
    case kFloat64: return 8;
    default: return 0;
  }
}

Bytes inflate_if_needed(std::span<const std::uint8_t> payload) {
  if (is_gzip(payload)) return gunzip(payload);
  return Bytes(payload.begin(), payload.end());
}

double stored_value(std::span<const std::uint8_t> raw, std::size_t offset, int datatype) {
  switch (datatype) {
    case kUint8: return raw[offset];
    case kInt16: return load_le<std::int16_t>(raw, offset);
    case kInt32: return load_le<std::int32_t>(raw, offset);
    case kFloat32: return load_le<float>(raw, offset);
    case kFloat64: return load_le<double>(raw, offset);
    default: throw Error(ErrorCode::UnsupportedDatatype, std::to_string(datatype));
  }
}

struct Decoded {
  Header header;
  Dims dims;
  std::vector<float> values;
  Affine affine;
};

Decoded decode(std::span<const std::uint8_t> payload) {
  const Bytes raw = inflate_if_needed(payload);
  Decoded d;
  d.header = parse_header(raw);
  d.dims = d.header.dims;
  d.affine = resolve_affine(d.header);

  const Header& h = d.header;
  const std::size_t n = d.dims[0] * d.dims[1] * d.dims[2];
  const int bps = bytes_per_sample(h.datatype);
  const auto base = static_cast<std::size_t>(h.vox_offset);
  const bool scaled = h.scl_slope != 0.0;

  d.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = stored_value(raw, base + i * static_cast<std::size_t>(bps), h.datatype);
    if (scaled) v = v * h.scl_slope + h.scl_inter;
    const auto f = static_cast<float>(v);
    if (!std::isfinite(v) || !std::isfinite(f))
      throw Error(ErrorCode::NonFiniteAfterScaling, "sample " + std::to_string(i));
    d.values[i] = f;
  }
  return d;
}

Bytes encode(const Affine& affine, const Dims& dims, int datatype) {
  for (std::size_t d : dims)
    if (d > static_cast<std::size_t>(kMaxDim))
      throw Error(ErrorCode::DimsOverflow, "axis extent " + std::to_string(d) + " exceeds 32767");
  const int bps = bytes_per_sample(datatype);
  const std::size_t n = dims[0] * dims[1] * dims[2];
  Bytes out(kSingleFileOffset + n * static_cast<std::size_t>(bps), 0);

  store_le<std::int32_t>(out, kOffSizeofHdr, static_cast<std::int32_t>(kHeaderSize));
  out[kOffRegular] = 'r';
  store_le<std::int16_t>(out, kOffDim, 3);
  for (int a = 0; a < 3; ++a) store_le<std::int16_t>(out, kOffDim + 2 * (a + 1), static_cast<std::int16_t>(dims[a]));
  for (int a = 4; a < 8; ++a) store_le<std::int16_t>(out, kOffDim + 2 * a, 1);
  store_le<std::int16_t>(out, kOffDatatype, static_cast<std::int16_t>(datatype));
  store_le<std::int16_t>(out, kOffBitpix, static_cast<std::int16_t>(bps * 8));

  const Spacing sp = voxel_spacing(affine);
  store_le<float>(out, kOffPixdim, 1.0f);
  for (int a = 0; a < 3; ++a) store_le<float>(out, kOffPixdim + 4 * (a + 1), static_cast<float>(sp[a]));
  store_le<float>(out, kOffVoxOffset, static_cast<float>(kSingleFileOffset));
  store_le<float>(out, kOffSclSlope, 1.0f);
  store_le<float>(out, kOffSclInter, 0.0f);
  out[kOffXyztUnits] = 2;  // NIFTI_UNITS_MM
  store_le<std::int16_t>(out, kOffQformCode, 0);
  store_le<std::int16_t>(out, kOffSformCode, 1);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      store_le<float>(out, kOffSrow + 16 * r + 4 * c, static_cast<float>(affine(r, c)));
  std::memcpy(out.data() + kOffMagic, "n+1\0", 4);
  return out;
}

}  // namespace

Header parse_header(std::span<const std::uint8_t> raw) {
  if (raw.size() < kHeaderSize)
    throw Error(ErrorCode::TruncatedPayload, "payload shorter than the 348-byte header");

  const auto sizeof_hdr = load_le<std::int32_t>(raw, kOffSizeofHdr);
  if (sizeof_hdr != static_cast<std::int32_t>(kHeaderSize)) {
    if (sizeof_hdr == 0x5C010000) throw Error(ErrorCode::BadHeader, "big-endian NIfTI is not supported");
    throw Error(ErrorCode::BadHeader, "sizeof_hdr is " + std::to_string(sizeof_hdr) + ", expected 348");
  }

  Header h;
  std::memcpy(h.magic.data(), raw.data() + kOffMagic, 4);
  if (std::memcmp(h.magic.data(), "ni1\0", 4) == 0)
    throw Error(ErrorCode::BadMagic, "two-file (.hdr/.img) NIfTI is not supported");
  if (std::memcmp(h.magic.data(), "n+1\0", 4) != 0)
    throw Error(ErrorCode::BadMagic, "not a single-file NIfTI-1 payload");

  h.dim_count = load_le<std::int16_t>(raw, kOffDim);
  if (h.dim_count < 1 || h.dim_count > 7)
    throw Error(ErrorCode::BadHeader, "dim[0] must be in 1..7, got " + std::to_string(h.dim_count));
  for (int a = 1; a <= h.dim_count; ++a) {
    const int extent = load_le<std::int16_t>(raw, kOffDim + 2 * a);
    if (extent < 1) throw Error(ErrorCode::BadHeader, "dim[" + std::to_string(a) + "] must be positive");
    if (a <= 3) {
      h.dims[a - 1] = static_cast<std::size_t>(extent);
    } else if (extent != 1) {
      throw Error(ErrorCode::BadHeader, "only 3-D volumes are supported");
    }
  }

  h.datatype = load_le<std::int16_t>(raw, kOffDatatype);
  h.bitpix = load_le<std::int16_t>(raw, kOffBitpix);
  if (bytes_per_sample(h.datatype) == 0)
    throw Error(ErrorCode::UnsupportedDatatype, "datatype code " + std::to_string(h.datatype));

  h.qfac = load_le<float>(raw, kOffPixdim);
  for (int a = 0; a < 3; ++a) h.pixdim[a] = load_le<float>(raw, kOffPixdim + 4 * (a + 1));
  h.vox_offset = load_le<float>(raw, kOffVoxOffset);
  h.scl_slope = load_le<float>(raw, kOffSclSlope);
  h.scl_inter = load_le<float>(raw, kOffSclInter);
  h.qform_code = load_le<std::int16_t>(raw, kOffQformCode);
  h.sform_code = load_le<std::int16_t>(raw, kOffSformCode);
  for (int q = 0; q < 6; ++q) h.quaternion[q] = load_le<float>(raw, kOffQuatern + 4 * q);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) h.srow[r][c] = load_le<float>(raw, kOffSrow + 16 * r + 4 * c);

  if (h.qform_code < 0 || h.sform_code < 0) throw Error(ErrorCode::BadHeader, "negative xform code");
  if (!(h.vox_offset >= static_cast<double>(kSingleFileOffset)) || h.vox_offset != std::floor(h.vox_offset))
    throw Error(ErrorCode::BadHeader, "vox_offset must be an integer >= 352");
  h.has_extension = raw.size() > kOffExtension && raw[kOffExtension] != 0;

  const std::size_t n = h.dims[0] * h.dims[1] * h.dims[2];
  const std::size_t need = static_cast<std::size_t>(h.vox_offset) +
                           n * static_cast<std::size_t>(bytes_per_sample(h.datatype));
  if (raw.size() < need)
    throw Error(ErrorCode::TruncatedPayload,
                "need " + std::to_string(need) + " bytes, payload has " + std::to_string(raw.size()));
  return h;
}

AffineSource affine_source(const Header& header) {
  if (header.sform_code > 0) return AffineSource::Sform;
  if (header.qform_code > 0) return AffineSource::Qform;
  return AffineSource::Pixdim;
}

Affine resolve_affine(const Header& h) {
  Affine::Matrix m{};
  switch (affine_source(h)) {
    case AffineSource::Sform:
      for (int r = 0; r < 3; ++r) m[r] = h.srow[r];
      break;
    case AffineSource::Qform: {
      double b = h.quaternion[0], c = h.quaternion[1], d = h.quaternion[2];
      double a = 1.0 - (b * b + c * c + d * d);
      if (a < 1e-7) {
        // 180 degree rotation; renormalize (b,c,d) and take a = 0.
        const double norm = 1.0 / std::sqrt(b * b + c * c + d * d);
        b *= norm;
        c *= norm;
        d *= norm;
        a = 0.0;
      } else {
        a = std::sqrt(a);
      }
      const double xd = h.pixdim[0] > 0 ? h.pixdim[0] : 1.0;
      const double yd = h.pixdim[1] > 0 ? h.pixdim[1] : 1.0;
      double zd = h.pixdim[2] > 0 ? h.pixdim[2] : 1.0;
      if (h.qfac < 0) zd = -zd;
      const double rot[3][3] = {
          {a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
          {2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b)},
          {2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - c * c - b * b},
      };
      for (int r = 0; r < 3; ++r) {
        m[r][0] = rot[r][0] * xd;
        m[r][1] = rot[r][1] * yd;
        m[r][2] = rot[r][2] * zd;
        m[r][3] = h.quaternion[3 + r];
      }
      break;
    }
    case AffineSource::Pixdim:
      for (int r = 0; r < 3; ++r) m[r][r] = h.pixdim[r];
      break;
  }
  Affine affine(m);
  affine.validate();
  return affine;
}

CtVolume read_ct(std::span<const std::uint8_t> payload, std::string source_id) {
  Decoded d = decode(payload);
  CtVolume v;
  v.dims = d.dims;
  v.samples = std::move(d.values);
  v.affine = d.affine;
  v.source_id = std::move(source_id);
  return v;
}

MaskVolume read_mask(std::span<const std::uint8_t> payload, std::string source_id) {
  Decoded d = decode(payload);
  MaskVolume v;
  v.dims = d.dims;
  v.samples.resize(d.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i) v.samples[i] = d.values[i] > 0.5f ? 1 : 0;
  v.affine = d.affine;
  v.source_id = std::move(source_id);
  return v;
}

Bytes write_volume(const CtVolume& volume) {
  check_shape(volume);
  Bytes out = encode(volume.affine, volume.dims, kFloat32);
  for (std::size_t i = 0; i < volume.samples.size(); ++i)
    store_le<float>(out, kSingleFileOffset + 4 * i, volume.samples[i]);
  return out;
}

Bytes write_volume(const MaskVolume& volume) {
  check_shape(volume);
  Bytes out = encode(volume.affine, volume.dims, kUint8);
  for (std::size_t i = 0; i < volume.samples.size(); ++i) {
    if (volume.samples[i] > 1) throw Error(ErrorCode::InvalidArgument, "mask label outside {0,1}");
    out[kSingleFileOffset + i] = volume.samples[i];
  }
  return out;
}

namespace {

bool wants_gzip(const std::filesystem::path& path) { return path.extension() == ".gz"; }

template <class V>
void save_impl(const std::filesystem::path& path, const V& volume) {
  Bytes bytes = write_volume(volume);
  if (wants_gzip(path)) bytes = gzip(bytes);
  write_file(path, bytes);
}

}  // namespace

namespace {

// Prefixes parse errors with the file path; read_file already names it.
template <class F>
auto with_path(const std::filesystem::path& path, F&& parse) {
  const Bytes bytes = read_file(path);
  try {
    return parse(bytes);
  } catch (const Error& e) {
    std::string_view detail = e.what();
    detail.remove_prefix(std::min(detail.size(), error_name(e.code()).size() + 2));
    throw Error(e.code(), path.string() + ": " + std::string(detail));
  }
}

}  // namespace

CtVolume load_ct(const std::filesystem::path& path) {
  return with_path(path, [&](const Bytes& b) { return read_ct(b, path.string()); });
}
MaskVolume load_mask(const std::filesystem::path& path) {
  return with_path(path, [&](const Bytes& b) { return read_mask(b, path.string()); });
}
void save(const std::filesystem::path& path, const CtVolume& volume) { save_impl(path, volume); }
void save(const std::filesystem::path& path, const MaskVolume& volume) { save_impl(path, volume); }

}  // namespace sarco::nifti
