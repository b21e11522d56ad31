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

// Skeletal muscle area from a labelled L3 slice, and the sex-specific
// sarcopenia cutoff test.

#ifndef SARCO_SMA_HPP
#define SARCO_SMA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sarco/types.hpp"

namespace sarco {

enum class Sex { Male, Female };

std::string_view to_string(Sex sex);
/// Accepts "male"/"m"/"female"/"f" (case-insensitive).
Sex parse_sex(std::string_view text);

struct Cutoffs {
  double male_cm2 = 144.0;
  double female_cm2 = 92.0;

  double for_sex(Sex sex) const { return sex == Sex::Male ? male_cm2 : female_cm2; }
};

struct SmaMeasurement {
  double area_cm2 = 0.0;
  /// Axial slice the area was taken from; -1 when summed over slices.
  std::int64_t slice_index = 0;
  std::uint64_t pixel_count = 0;
  double pixel_area_mm2 = 0.0;
  std::string scan_id;
};

struct SarcopeniaAssessment {
  Sex sex = Sex::Male;
  double area_cm2 = 0.0;
  double cutoff_cm2 = 0.0;
  bool sarcopenic = false;
};

/// How a mask with several labelled axial slices is reduced to one area.
struct SlicePolicy {
  enum class Kind { Single, Sum, Largest, Index };
  Kind kind = Kind::Single;
  std::size_t index = 0;  // used by Kind::Index

  static SlicePolicy parse(std::string_view text);  // single|sum|largest|index=<k>
  std::string str() const;
};

/// The unique axial slice holding any label. Throws EmptyMask or
/// MultipleAnnotatedSlices.
std::size_t annotated_slice_index(const MaskVolume& mask);

/// Count of 1-labels in one axial slice times the in-plane pixel area.
SmaMeasurement compute_sma(const MaskVolume& mask, std::size_t slice_index);

/// Applies the slice policy, then compute_sma (or the sum over slices).
SmaMeasurement measure(const MaskVolume& mask, const SlicePolicy& policy);

/// sarcopenic iff area < cutoff for the given sex.
SarcopeniaAssessment classify(double area_cm2, Sex sex, const Cutoffs& cutoffs = {});

}  // namespace sarco

#endif  // SARCO_SMA_HPP
