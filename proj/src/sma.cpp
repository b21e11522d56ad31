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

#include "sarco/sma.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

#include "sarco/error.hpp"
#include "sarco/geometry.hpp"

namespace sarco {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Labelled pixels per axial slice.
std::vector<std::uint64_t> slice_counts(const MaskVolume& mask, int axis) {
  check_shape(mask);
  std::vector<std::uint64_t> counts(mask.dims[axis], 0);
  for (std::size_t k = 0; k < mask.dims[2]; ++k)
    for (std::size_t j = 0; j < mask.dims[1]; ++j)
      for (std::size_t i = 0; i < mask.dims[0]; ++i)
        if (mask.at(i, j, k)) {
          const std::size_t idx[3] = {i, j, k};
          ++counts[idx[axis]];
        }
  return counts;
}

}  // namespace

std::string_view to_string(Sex sex) { return sex == Sex::Male ? "male" : "female"; }

Sex parse_sex(std::string_view text) {
  const std::string s = lower(text);
  if (s == "male" || s == "m") return Sex::Male;
  if (s == "female" || s == "f") return Sex::Female;
  throw Error(ErrorCode::InvalidArgument, "sex must be male or female, got '" + std::string(text) + "'");
}

SlicePolicy SlicePolicy::parse(std::string_view text) {
  const std::string s = lower(text);
  SlicePolicy p;
  if (s == "single") {
    p.kind = Kind::Single;
  } else if (s == "sum") {
    p.kind = Kind::Sum;
  } else if (s == "largest") {
    p.kind = Kind::Largest;
  } else if (s.rfind("index=", 0) == 0) {
    p.kind = Kind::Index;
    const char* first = s.data() + 6;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, p.index);
    if (first == last || ec != std::errc() || ptr != last)
      throw Error(ErrorCode::InvalidArgument, "bad slice index in '" + std::string(text) + "'");
  } else {
    throw Error(ErrorCode::InvalidArgument, "slice policy must be single, sum, largest or index=<k>");
  }
  return p;
}

std::string SlicePolicy::str() const {
  switch (kind) {
    case Kind::Single: return "single";
    case Kind::Sum: return "sum";
    case Kind::Largest: return "largest";
    case Kind::Index: return "index=" + std::to_string(index);
  }
  return "single";
}

std::size_t annotated_slice_index(const MaskVolume& mask) {
  const auto counts = slice_counts(mask, axial_axis(mask.affine));
  std::vector<std::size_t> labelled;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) labelled.push_back(k);
  if (labelled.empty()) throw Error(ErrorCode::EmptyMask, "mask has no labelled voxels");
  if (labelled.size() > 1)
    throw Error(ErrorCode::MultipleAnnotatedSlices,
                std::to_string(labelled.size()) + " axial slices are labelled (first " + std::to_string(labelled[0]) +
                    ", last " + std::to_string(labelled.back()) + "); choose a slice policy");
  return labelled.front();
}

SmaMeasurement compute_sma(const MaskVolume& mask, std::size_t slice_index) {
  const int axis = axial_axis(mask.affine);
  if (slice_index >= mask.dims[axis])
    throw Error(ErrorCode::InvalidArgument, "slice index " + std::to_string(slice_index) + " out of range");
  const MaskSlice slice = extract_slice(mask, axis, slice_index);
  SmaMeasurement m;
  m.scan_id = mask.source_id;
  m.slice_index = static_cast<std::int64_t>(slice_index);
  m.pixel_count = static_cast<std::uint64_t>(std::count(slice.data.begin(), slice.data.end(), std::uint8_t{1}));
  m.pixel_area_mm2 = slice_pixel_area(mask.affine, axis);
  m.area_cm2 = static_cast<double>(m.pixel_count) * m.pixel_area_mm2 / 100.0;
  return m;
}

SmaMeasurement measure(const MaskVolume& mask, const SlicePolicy& policy) {
  switch (policy.kind) {
    case SlicePolicy::Kind::Single:
      return compute_sma(mask, annotated_slice_index(mask));
    case SlicePolicy::Kind::Index:
      return compute_sma(mask, policy.index);
    case SlicePolicy::Kind::Largest: {
      const auto counts = slice_counts(mask, axial_axis(mask.affine));
      const auto it = std::max_element(counts.begin(), counts.end());
      if (*it == 0) throw Error(ErrorCode::EmptyMask, "mask has no labelled voxels");
      return compute_sma(mask, static_cast<std::size_t>(it - counts.begin()));
    }
    case SlicePolicy::Kind::Sum: {
      const int axis = axial_axis(mask.affine);
      const auto counts = slice_counts(mask, axis);
      SmaMeasurement m;
      m.scan_id = mask.source_id;
      m.slice_index = -1;
      for (auto c : counts) m.pixel_count += c;
      if (m.pixel_count == 0) throw Error(ErrorCode::EmptyMask, "mask has no labelled voxels");
      m.pixel_area_mm2 = slice_pixel_area(mask.affine, axis);
      m.area_cm2 = static_cast<double>(m.pixel_count) * m.pixel_area_mm2 / 100.0;
      return m;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown slice policy");
}

SarcopeniaAssessment classify(double area_cm2, Sex sex, const Cutoffs& cutoffs) {
  if (!(area_cm2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "area must be non-negative");
  SarcopeniaAssessment a;
  a.sex = sex;
  a.area_cm2 = area_cm2;
  a.cutoff_cm2 = cutoffs.for_sex(sex);
  a.sarcopenic = area_cm2 < a.cutoff_cm2;
  return a;
}

}  // namespace sarco
