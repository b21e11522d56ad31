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

// Affine bookkeeping, reorientation and spacing resampling.

#ifndef SARCO_GEOMETRY_HPP
#define SARCO_GEOMETRY_HPP

#include <array>

#include "sarco/types.hpp"

namespace sarco {

enum class Interp { Trilinear, Nearest };

/// Euclidean norm of each column of the 3x3 block.
Spacing voxel_spacing(const Affine& affine);

/// Physical area (mm^2) of one pixel in a slice normal to `slice_axis`: the
/// norm of the cross product of the two in-plane columns.
double slice_pixel_area(const Affine& affine, int slice_axis);

/// Labels each volume axis with the physical direction its column points
/// along most strongly (+x R, -x L, +y A, -y P, +z S, -z I). Throws
/// AmbiguousOrientation on ties or when two columns share a physical axis.
OrientationCode orientation_of(const Affine& affine);

/// Index of the volume axis labelled S or I.
int axial_axis(const Affine& affine);

/// Generic axis permutation with optional reversal: output axis t reads
/// input axis perm[t], reversed when reverse[t]. Physical coordinates of
/// every voxel are preserved.
template <class T>
Volume<T> permute_axes(const Volume<T>& volume, const std::array<int, 3>& perm,
                       const std::array<bool, 3>& reverse);

/// Reverses one axis, updating the affine so physical coordinates hold.
template <class T>
Volume<T> flip(const Volume<T>& volume, int axis);

/// Permutes/reverses axes so orientation_of(result.affine) == target.
/// No interpolation is involved.
template <class T>
Volume<T> reorient(const Volume<T>& volume, const OrientationCode& target);

/// Resamples onto a grid with the same origin and direction cosines and the
/// requested spacing. Out-of-grid positions clamp to the nearest edge voxel.
/// Masks accept only Interp::Nearest.
CtVolume resample(const CtVolume& volume, const Spacing& target, Interp interp = Interp::Trilinear);
MaskVolume resample(const MaskVolume& volume, const Spacing& target, Interp interp = Interp::Nearest);

}  // namespace sarco

#endif  // SARCO_GEOMETRY_HPP
