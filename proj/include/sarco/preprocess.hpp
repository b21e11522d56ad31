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

// Intensity windowing and the augmentation primitives. Every primitive is
// deterministic; randomness only enters through sample_augmentation().

#ifndef SARCO_PREPROCESS_HPP
#define SARCO_PREPROCESS_HPP

#include <array>
#include <cstdint>
#include <random>

#include "sarco/geometry.hpp"
#include "sarco/types.hpp"

namespace sarco {

struct HuWindow {
  double lo = -175.0;
  double hi = 250.0;

  void validate() const;
};

CtVolume clip_hu(const CtVolume& volume, const HuWindow& window = {});

/// Clips to the window, then maps lo..hi onto 0..1.
CtVolume normalize_unit(const CtVolume& volume, const HuWindow& window = {});

/// Grows each axis to `target`, centring the original block. When the
/// growth is odd the extra voxel goes on the high side.
template <class T>
Volume<T> pad(const Volume<T>& volume, const Dims& target, T fill);

/// Takes the centred sub-block of extent `target`. When the excess is odd
/// the extra voxel is dropped from the high side.
template <class T>
Volume<T> crop(const Volume<T>& volume, const Dims& target);

/// Rotates each transverse (axis 0/1) slice about the in-plane centre by
/// `degrees`, counter-clockwise in index space. Out-of-support samples take
/// `fill`. Masks accept only Interp::Nearest.
CtVolume rotate_inplane(const CtVolume& volume, double degrees, Interp interp, float fill);
MaskVolume rotate_inplane(const MaskVolume& volume, double degrees, Interp interp = Interp::Nearest,
                          std::uint8_t fill = 0);

struct AugmentConfig {
  double max_rotation_deg = 10.0;
  std::size_t crop_x = 192;
  std::size_t crop_y = 192;
  double flip_probability = 0.5;
};

struct AugmentParams {
  double rotation_deg = 0.0;
  bool flip_x = false;
  bool flip_y = false;
  std::size_t crop_x = 192;
  std::size_t crop_y = 192;
};

AugmentParams sample_augmentation(std::mt19937_64& rng, const AugmentConfig& config);

/// rotate -> flip -> pad (when smaller than the crop) -> centred crop.
CtVolume augment(const CtVolume& volume, const AugmentParams& params, float fill);
MaskVolume augment(const MaskVolume& volume, const AugmentParams& params);

}  // namespace sarco

#endif  // SARCO_PREPROCESS_HPP
