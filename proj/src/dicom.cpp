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

#include "sarco/dicom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string_view>

#include "bytes.hpp"
#include "sarco/error.hpp"
#include "sarco/io.hpp"

namespace sarco::dicom {

using detail::load_le;

namespace {

using Tag = std::uint32_t;

constexpr Tag make_tag(std::uint16_t group, std::uint16_t element) {
  return (static_cast<Tag>(group) << 16) | element;
}

constexpr Tag kTransferSyntax = make_tag(0x0002, 0x0010);
constexpr Tag kSeriesUid = make_tag(0x0020, 0x000E);
constexpr Tag kInstanceNumber = make_tag(0x0020, 0x0013);
constexpr Tag kImagePosition = make_tag(0x0020, 0x0032);
constexpr Tag kImageOrientation = make_tag(0x0020, 0x0037);
constexpr Tag kRows = make_tag(0x0028, 0x0010);
constexpr Tag kCols = make_tag(0x0028, 0x0011);
constexpr Tag kPixelSpacing = make_tag(0x0028, 0x0030);
constexpr Tag kBitsAllocated = make_tag(0x0028, 0x0100);
constexpr Tag kBitsStored = make_tag(0x0028, 0x0101);
constexpr Tag kPixelRepresentation = make_tag(0x0028, 0x0103);
constexpr Tag kRescaleIntercept = make_tag(0x0028, 0x1052);
constexpr Tag kRescaleSlope = make_tag(0x0028, 0x1053);
constexpr Tag kPixelData = make_tag(0x7FE0, 0x0010);

constexpr Tag kItem = make_tag(0xFFFE, 0xE000);
constexpr Tag kItemDelimiter = make_tag(0xFFFE, 0xE00D);
constexpr Tag kSequenceDelimiter = make_tag(0xFFFE, 0xE0DD);

constexpr std::uint32_t kUndefinedLength = 0xFFFFFFFFu;

std::string tag_text(Tag tag) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "(%04X,%04X)", tag >> 16, tag & 0xFFFF);
  return buf;
}

bool has_long_length(std::string_view vr) {
  return vr == "OB" || vr == "OW" || vr == "OF" || vr == "SQ" || vr == "UT" || vr == "UN" ||
         vr == "OD" || vr == "OL" || vr == "OV" || vr == "UC" || vr == "UR" || vr == "SV" || vr == "UV";
}

struct Element {
  Tag tag = 0;
  std::uint32_t length = 0;
  std::size_t offset = 0;  // start of the value
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t pos, bool explicit_vr)
      : bytes_(bytes), pos_(pos), explicit_vr_(explicit_vr) {}

  bool done() const { return pos_ >= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  void set_explicit(bool e) { explicit_vr_ = e; }

  Tag peek_tag() const {
    need(4);
    return make_tag(load_le<std::uint16_t>(bytes_, pos_), load_le<std::uint16_t>(bytes_, pos_ + 2));
  }

  Element next() {
    Element el;
    el.tag = peek_tag();
    pos_ += 4;
    const bool delimiter = (el.tag >> 16) == 0xFFFE;
    if (explicit_vr_ && !delimiter) {
      need(2);
      const std::string_view vr(reinterpret_cast<const char*>(bytes_.data() + pos_), 2);
      pos_ += 2;
      if (has_long_length(vr)) {
        need(6);
        el.length = load_le<std::uint32_t>(bytes_, pos_ + 2);
        pos_ += 6;
      } else {
        need(2);
        el.length = load_le<std::uint16_t>(bytes_, pos_);
        pos_ += 2;
      }
    } else {
      need(4);
      el.length = load_le<std::uint32_t>(bytes_, pos_);
      pos_ += 4;
    }
    el.offset = pos_;
    return el;
  }

  void skip_value(const Element& el) {
    if (el.length == kUndefinedLength) {
      skip_undefined_sequence();
      return;
    }
    need(el.length);
    pos_ += el.length;
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error(ErrorCode::TruncatedPayload, "element runs past end of file");
  }

  // Skips items until the sequence delimitation item.
  void skip_undefined_sequence() {
    while (true) {
      const Element item = next();
      if (item.tag == kSequenceDelimiter) return;
      if (item.tag != kItem) throw Error(ErrorCode::BadHeader, "malformed sequence at " + tag_text(item.tag));
      if (item.length != kUndefinedLength) {
        need(item.length);
        pos_ += item.length;
        continue;
      }
      while (true) {
        const Element inner = next();
        if (inner.tag == kItemDelimiter) break;
        skip_value(inner);
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
  bool explicit_vr_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\0' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::string_view value_text(std::span<const std::uint8_t> bytes, const Element& el) {
  return trim(std::string_view(reinterpret_cast<const char*>(bytes.data() + el.offset), el.length));
}

std::vector<double> parse_numbers(std::string_view text, Tag tag) {
  std::vector<double> out;
  while (true) {
    const std::size_t sep = text.find('\\');
    const std::string_view part = trim(text.substr(0, sep));
    double v = 0.0;
    const char* first = part.data();
    if (!part.empty() && part.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw Error(ErrorCode::BadHeader, "unparseable numeric value in " + tag_text(tag));
    out.push_back(v);
    if (sep == std::string_view::npos) break;
    text.remove_prefix(sep + 1);
  }
  return out;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

Vec3 Slice::normal() const { return cross(row_cosine(), col_cosine()); }

Slice parse_slice(std::span<const std::uint8_t> payload, std::string source) {
  if (payload.size() < 132 || std::string_view(reinterpret_cast<const char*>(payload.data() + 128), 4) != "DICM")
    throw Error(ErrorCode::MissingPreamble, "no \"DICM\" marker at offset 128");

  std::map<Tag, Element> found;
  Reader reader(payload, 132, /*explicit_vr=*/true);

  // File meta group is always explicit VR little endian.
  std::string transfer_syntax;
  while (!reader.done() && (reader.peek_tag() >> 16) == 0x0002) {
    const Element el = reader.next();
    if (el.tag == kTransferSyntax) transfer_syntax = std::string(value_text(payload, el));
    reader.skip_value(el);
  }
  if (transfer_syntax.empty()) throw Error(ErrorCode::MissingRequiredTag, tag_text(kTransferSyntax));
  if (transfer_syntax == kImplicitVRLittleEndian) {
    reader.set_explicit(false);
  } else if (transfer_syntax != kExplicitVRLittleEndian) {
    throw Error(ErrorCode::CompressedTransferSyntax,
                "transfer syntax " + transfer_syntax + " is not uncompressed little-endian; convert first");
  }

  while (!reader.done()) {
    const Element el = reader.next();
    if (el.tag == kPixelData && el.length == kUndefinedLength)
      throw Error(ErrorCode::CompressedTransferSyntax, "encapsulated pixel data");
    if (el.length != kUndefinedLength) found[el.tag] = el;
    if (el.tag == kPixelData && el.offset + el.length > payload.size())
      throw Error(ErrorCode::PixelDataLengthMismatch, "pixel data runs past end of file");
    reader.skip_value(el);
  }

  auto require = [&](Tag tag) -> const Element& {
    auto it = found.find(tag);
    if (it == found.end()) throw Error(ErrorCode::MissingRequiredTag, tag_text(tag));
    return it->second;
  };
  auto optional = [&](Tag tag) -> std::optional<Element> {
    auto it = found.find(tag);
    if (it == found.end()) return std::nullopt;
    return it->second;
  };
  auto us = [&](const Element& el) {
    if (el.length < 2) throw Error(ErrorCode::BadHeader, "short US value in " + tag_text(el.tag));
    return static_cast<int>(load_le<std::uint16_t>(payload, el.offset));
  };
  auto numbers = [&](Tag tag, std::size_t count) {
    auto values = parse_numbers(value_text(payload, require(tag)), tag);
    if (values.size() != count)
      throw Error(ErrorCode::BadHeader, tag_text(tag) + " must hold " + std::to_string(count) + " values");
    return values;
  };

  Slice s;
  s.source = std::move(source);
  s.rows = us(require(kRows));
  s.cols = us(require(kCols));
  if (s.rows <= 0 || s.cols <= 0) throw Error(ErrorCode::BadHeader, "rows and columns must be positive");

  const auto spacing = numbers(kPixelSpacing, 2);
  s.row_spacing = spacing[0];
  s.col_spacing = spacing[1];
  if (!(s.row_spacing > 0) || !(s.col_spacing > 0)) throw Error(ErrorCode::BadHeader, "pixel spacing must be positive");
  const auto position = numbers(kImagePosition, 3);
  s.image_position = {position[0], position[1], position[2]};
  const auto orientation = numbers(kImageOrientation, 6);
  std::copy(orientation.begin(), orientation.end(), s.image_orientation.begin());
  const Vec3 r = s.row_cosine();
  const Vec3 c = s.col_cosine();
  if (std::abs(std::sqrt(dot(r, r)) - 1.0) > 1e-3 || std::abs(std::sqrt(dot(c, c)) - 1.0) > 1e-3 ||
      std::abs(dot(r, c)) > 1e-3)
    throw Error(ErrorCode::InvalidArgument, "image orientation cosines are not orthonormal");

  const auto slope = optional(kRescaleSlope);
  const auto intercept = optional(kRescaleIntercept);
  s.rescale_defaulted = !slope || !intercept;
  if (slope) s.rescale_slope = parse_numbers(value_text(payload, *slope), kRescaleSlope).at(0);
  if (intercept) s.rescale_intercept = parse_numbers(value_text(payload, *intercept), kRescaleIntercept).at(0);

  if (auto el = optional(kInstanceNumber); el && el->length > 0)
    s.instance_number = static_cast<int>(parse_numbers(value_text(payload, *el), kInstanceNumber).at(0));
  s.series_uid = std::string(value_text(payload, require(kSeriesUid)));

  const int bits_allocated = us(require(kBitsAllocated));
  if (bits_allocated != 8 && bits_allocated != 16 && bits_allocated != 32)
    throw Error(ErrorCode::BadHeader, "unsupported bits allocated " + std::to_string(bits_allocated));
  const int bits_stored = found.count(kBitsStored) ? us(found[kBitsStored]) : bits_allocated;
  if (bits_stored < 1 || bits_stored > bits_allocated) throw Error(ErrorCode::BadHeader, "invalid bits stored");
  const bool is_signed = found.count(kPixelRepresentation) && us(found[kPixelRepresentation]) == 1;

  const Element& pixels = require(kPixelData);
  const std::size_t count = static_cast<std::size_t>(s.rows) * static_cast<std::size_t>(s.cols);
  const std::size_t bytes_per = static_cast<std::size_t>(bits_allocated / 8);
  const std::size_t expected = count * bytes_per;
  // Odd-length values are padded to even length.
  if (pixels.length != expected && !(expected % 2 == 1 && pixels.length == expected + 1))
    throw Error(ErrorCode::PixelDataLengthMismatch,
                "pixel data has " + std::to_string(pixels.length) + " bytes, expected " + std::to_string(expected));

  const std::uint64_t value_mask = bits_stored == 64 ? ~0ull : ((1ull << bits_stored) - 1);
  s.stored_pixels.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t off = pixels.offset + p * bytes_per;
    std::uint64_t raw = bytes_per == 1   ? payload[off]
                        : bytes_per == 2 ? load_le<std::uint16_t>(payload, off)
                                         : load_le<std::uint32_t>(payload, off);
    raw &= value_mask;
    std::int64_t v = static_cast<std::int64_t>(raw);
    if (is_signed && (raw >> (bits_stored - 1)) & 1u) v -= static_cast<std::int64_t>(1ull << bits_stored);
    s.stored_pixels[p] = static_cast<std::int32_t>(v);
  }
  return s;
}

CtVolume assemble_series(std::vector<Slice> slices) {
  if (slices.empty()) throw Error(ErrorCode::NoInput, "no slices");
  if (slices.size() < 2) throw Error(ErrorCode::InsufficientSlices, "a series needs at least 2 slices");

  const Slice& ref = slices.front();
  for (const Slice& s : slices) {
    if (s.series_uid != ref.series_uid)
      throw Error(ErrorCode::MixedSeries, "series UIDs " + ref.series_uid + " and " + s.series_uid);
    bool same = s.rows == ref.rows && s.cols == ref.cols && std::abs(s.row_spacing - ref.row_spacing) <= 1e-3 &&
                std::abs(s.col_spacing - ref.col_spacing) <= 1e-3;
    for (int e = 0; e < 6; ++e) same = same && std::abs(s.image_orientation[e] - ref.image_orientation[e]) <= 1e-3;
    if (!same) throw Error(ErrorCode::MixedSeries, "slice geometry differs within series " + ref.series_uid);
  }

  const Vec3 normal = ref.normal();
  auto along = [&](const Slice& s) { return dot(s.image_position, normal); };
  std::sort(slices.begin(), slices.end(), [&](const Slice& a, const Slice& b) { return along(a) < along(b); });

  std::vector<double> steps;
  for (std::size_t k = 1; k < slices.size(); ++k) {
    const double step = along(slices[k]) - along(slices[k - 1]);
    if (step < 1e-4) throw Error(ErrorCode::DuplicatePosition, "two slices share position " + std::to_string(along(slices[k])));
    steps.push_back(step);
  }
  const auto [min_step, max_step] = std::minmax_element(steps.begin(), steps.end());
  if (*max_step - *min_step > 0.01)
    throw Error(ErrorCode::NonUniformSliceSpacing,
                "slice gaps range from " + std::to_string(*min_step) + " to " + std::to_string(*max_step) + " mm");
  const double step = (along(slices.back()) - along(slices.front())) / static_cast<double>(slices.size() - 1);

  const Vec3 origin = slices.front().image_position;
  for (const Slice& s : slices) {
    Vec3 offset{};
    for (int d = 0; d < 3; ++d) offset[d] = s.image_position[d] - origin[d];
    const double n = dot(offset, normal);
    for (int d = 0; d < 3; ++d) offset[d] -= n * normal[d];
    if (std::sqrt(dot(offset, offset)) > 0.01)
      throw Error(ErrorCode::InvalidArgument, "slice positions do not lie along the slice normal (gantry tilt)");
  }

  // DICOM patient space is LPS; negate x and y for RAS+.
  Affine::Matrix m{};
  const Vec3 rc = ref.row_cosine();
  const Vec3 cc = ref.col_cosine();
  for (int d = 0; d < 3; ++d) {
    const double sign = d < 2 ? -1.0 : 1.0;
    m[d][0] = sign * rc[d] * ref.col_spacing;
    m[d][1] = sign * cc[d] * ref.row_spacing;
    m[d][2] = sign * normal[d] * step;
    m[d][3] = sign * origin[d];
  }

  CtVolume v;
  v.dims = {static_cast<std::size_t>(ref.cols), static_cast<std::size_t>(ref.rows), slices.size()};
  v.affine = Affine(m);
  v.source_id = ref.series_uid;
  v.samples.resize(v.size());
  for (std::size_t k = 0; k < slices.size(); ++k) {
    const Slice& s = slices[k];
    if (s.stored_pixels.size() != static_cast<std::size_t>(s.rows) * static_cast<std::size_t>(s.cols))
      throw Error(ErrorCode::PixelDataLengthMismatch, "slice pixel count does not match rows*cols");
    for (std::size_t row = 0; row < v.dims[1]; ++row)
      for (std::size_t col = 0; col < v.dims[0]; ++col)
        v.at(col, row, k) = static_cast<float>(s.stored_pixels[row * v.dims[0] + col] * s.rescale_slope +
                                               s.rescale_intercept);
  }
  return v;
}

SeriesResult load_series(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::NoInput, "no files in " + dir.string());

  SeriesResult result;
  std::vector<Slice> slices;
  std::string failures;
  std::optional<ErrorCode> first_code;
  for (const auto& path : files) {
    try {
      slices.push_back(parse_slice(read_file(path), path.string()));
      if (slices.back().rescale_defaulted)
        result.warnings.push_back(path.string() + ": rescale slope/intercept missing; using 1/0");
    } catch (const Error& e) {
      if (!first_code) first_code = e.code();
      failures += (failures.empty() ? "" : "\n") + path.string() + ": " + e.what();
    }
  }
  if (first_code) throw Error(*first_code, "unreadable slices:\n" + failures);

  result.slice_count = slices.size();
  result.volume = assemble_series(std::move(slices));
  result.volume.source_id = dir.string();
  const Vec3 col = result.volume.affine.column(2);
  result.slice_step_mm = std::sqrt(dot(col, col));
  return result;
}

}  // namespace sarco::dicom
