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

#include "sarco/segment.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sarco/error.hpp"
#include "sarco/geometry.hpp"

namespace sarco {

void SegParams::validate() const {
  muscle_window.validate();
  if (!std::isfinite(body_threshold_hu)) throw Error(ErrorCode::InvalidArgument, "body threshold must be finite");
  if (opening_radius_px < 0) throw Error(ErrorCode::InvalidArgument, "opening radius must be >= 0");
  if (!(min_component_mm2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "min component area must be > 0");
}

Components label_components(const MaskSlice& mask) {
  Components c;
  c.labels = Grid2D<std::int32_t>(mask.nx, mask.ny, 0);
  c.sizes.push_back(0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t j = 0; j < mask.ny; ++j) {
    for (std::size_t i = 0; i < mask.nx; ++i) {
      if (!mask.at(i, j) || c.labels.at(i, j) != 0) continue;
      const auto label = static_cast<std::int32_t>(c.sizes.size());
      std::size_t size = 0;
      stack.clear();
      stack.emplace_back(i, j);
      c.labels.at(i, j) = label;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        ++size;
        auto visit = [&](std::size_t nx, std::size_t ny) {
          if (mask.at(nx, ny) && c.labels.at(nx, ny) == 0) {
            c.labels.at(nx, ny) = label;
            stack.emplace_back(nx, ny);
          }
        };
        if (x > 0) visit(x - 1, y);
        if (x + 1 < mask.nx) visit(x + 1, y);
        if (y > 0) visit(x, y - 1);
        if (y + 1 < mask.ny) visit(x, y + 1);
      }
      c.sizes.push_back(size);
    }
  }
  return c;
}

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
  return offsets;
}

}  // namespace

MaskSlice open_disk(const MaskSlice& mask, int radius) {
  if (radius <= 0) return mask;
  const auto offsets = disk_offsets(radius);
  const auto w = static_cast<std::ptrdiff_t>(mask.nx);
  const auto h = static_cast<std::ptrdiff_t>(mask.ny);

  MaskSlice eroded(mask.nx, mask.ny, 0);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      bool keep = true;
      for (auto [dx, dy] : offsets) {
        const std::ptrdiff_t px = x + dx;
        const std::ptrdiff_t py = y + dy;
        if (px < 0 || py < 0 || px >= w || py >= h || !mask.at(static_cast<std::size_t>(px), static_cast<std::size_t>(py))) {
          keep = false;
          break;
        }
      }
      eroded.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = keep ? 1 : 0;
    }
  }

  MaskSlice opened(mask.nx, mask.ny, 0);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      if (!eroded.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) continue;
      for (auto [dx, dy] : offsets)
        opened.at(static_cast<std::size_t>(x + dx), static_cast<std::size_t>(y + dy)) = 1;
    }
  }
  return opened;
}

MaskSlice segment_slice(const SliceImage& slice, double pixel_area_mm2, const SegParams& params) {
  params.validate();
  if (!(pixel_area_mm2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "pixel area must be > 0");
  for (float v : slice.data)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "slice contains non-finite values");

  MaskSlice above(slice.nx, slice.ny, 0);
  for (std::size_t p = 0; p < slice.data.size(); ++p) above.data[p] = slice.data[p] > params.body_threshold_hu ? 1 : 0;
  const Components body = label_components(above);
  if (body.sizes.size() < 2) throw Error(ErrorCode::EmptySlice, "no voxel above the body threshold");
  // Largest component; the lowest label wins ties.
  const auto largest = static_cast<std::int32_t>(std::max_element(body.sizes.begin() + 1, body.sizes.end()) -
                                                 body.sizes.begin());

  MaskSlice candidate(slice.nx, slice.ny, 0);
  for (std::size_t p = 0; p < slice.data.size(); ++p) {
    const double hu = slice.data[p];
    candidate.data[p] = body.labels.data[p] == largest && hu >= params.muscle_window.lo &&
                                hu <= params.muscle_window.hi
                            ? 1
                            : 0;
  }

  MaskSlice opened = open_disk(candidate, params.opening_radius_px);
  const Components parts = label_components(opened);
  for (std::size_t p = 0; p < opened.data.size(); ++p) {
    const auto label = parts.labels.data[p];
    if (label == 0) continue;
    if (static_cast<double>(parts.sizes[static_cast<std::size_t>(label)]) * pixel_area_mm2 < params.min_component_mm2)
      opened.data[p] = 0;
  }
  return opened;
}

MaskVolume segment_volume(const CtVolume& volume, std::size_t slice_index, const SegParams& params) {
  check_shape(volume);
  const int axis = axial_axis(volume.affine);
  const SliceImage slice = extract_slice(volume, axis, slice_index);
  const MaskSlice labels = segment_slice(slice, slice_pixel_area(volume.affine, axis), params);
  MaskVolume mask;
  mask.dims = volume.dims;
  mask.affine = volume.affine;
  mask.source_id = volume.source_id;
  mask.samples.assign(volume.size(), 0);
  insert_slice(mask, axis, slice_index, labels);
  return mask;
}

}  // namespace sarco
