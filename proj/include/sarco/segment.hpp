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

// Classical threshold + morphology muscle segmenter used as a deterministic
// stand-in for a learned model.

#ifndef SARCO_SEGMENT_HPP
#define SARCO_SEGMENT_HPP

#include <cstdint>
#include <vector>

#include "sarco/preprocess.hpp"
#include "sarco/types.hpp"

namespace sarco {

struct SegParams {
  HuWindow muscle_window{-29.0, 150.0};
  double body_threshold_hu = -500.0;
  int opening_radius_px = 1;
  double min_component_mm2 = 100.0;

  void validate() const;
};

/// 4-connected component labels (0 = background, 1..n in raster order of
/// first pixel) and the pixel count of each label.
struct Components {
  Grid2D<std::int32_t> labels;
  std::vector<std::size_t> sizes;  // sizes[0] unused
};

Components label_components(const MaskSlice& mask);

/// Binary opening with a disk of the given radius; pixels outside the grid
/// count as background.
MaskSlice open_disk(const MaskSlice& mask, int radius);

/// 1. body = largest 4-connected component of HU > body threshold
/// 2. candidate = body and HU inside the muscle window
/// 3. opening with a disk of opening_radius_px
/// 4. drop 4-connected components smaller than min_component_mm2
/// Throws EmptySlice when no body is found.
MaskSlice segment_slice(const SliceImage& slice, double pixel_area_mm2, const SegParams& params = {});

/// Segments axial slice `slice_index` of a volume; other slices stay 0.
MaskVolume segment_volume(const CtVolume& volume, std::size_t slice_index, const SegParams& params = {});

}  // namespace sarco

#endif  // SARCO_SEGMENT_HPP
