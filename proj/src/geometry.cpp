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

#include "sarco/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sarco/error.hpp"

namespace sarco {

namespace {

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

constexpr char kPositive[3] = {'R', 'A', 'S'};
constexpr char kNegative[3] = {'L', 'P', 'I'};

int physical_axis(char label) {
  for (int p = 0; p < 3; ++p)
    if (label == kPositive[p] || label == kNegative[p]) return p;
  return -1;
}

}  // namespace

Spacing voxel_spacing(const Affine& affine) {
  return {norm(affine.column(0)), norm(affine.column(1)), norm(affine.column(2))};
}

double slice_pixel_area(const Affine& affine, int slice_axis) {
  if (slice_axis < 0 || slice_axis > 2) throw Error(ErrorCode::InvalidArgument, "slice axis must be 0, 1 or 2");
  const int u = slice_axis == 0 ? 1 : 0;
  const int w = slice_axis == 2 ? 1 : 2;
  return norm(cross(affine.column(u), affine.column(w)));
}

OrientationCode orientation_of(const Affine& affine) {
  OrientationCode code;
  bool used[3] = {false, false, false};
  for (int c = 0; c < 3; ++c) {
    const Vec3 col = affine.column(c);
    int best = 0;
    for (int p = 1; p < 3; ++p)
      if (std::abs(col[p]) > std::abs(col[best])) best = p;
    for (int p = 0; p < 3; ++p)
      if (p != best && std::abs(col[p]) == std::abs(col[best]))
        throw Error(ErrorCode::AmbiguousOrientation, "column " + std::to_string(c) + " has no strictly dominant axis");
    if (used[best])
      throw Error(ErrorCode::AmbiguousOrientation, "two columns map to the same physical axis");
    used[best] = true;
    code.axes[c] = col[best] > 0 ? kPositive[best] : kNegative[best];
  }
  return code;
}

int axial_axis(const Affine& affine) {
  const OrientationCode code = orientation_of(affine);
  for (int a = 0; a < 3; ++a)
    if (physical_axis(code.axes[a]) == 2) return a;
  throw Error(ErrorCode::AmbiguousOrientation, "no superior/inferior axis");
}

template <class T>
Volume<T> permute_axes(const Volume<T>& volume, const std::array<int, 3>& perm,
                       const std::array<bool, 3>& reverse) {
  check_shape(volume);
  Volume<T> out;
  out.source_id = volume.source_id;
  for (int t = 0; t < 3; ++t) out.dims[t] = volume.dims[perm[t]];

  // Source voxel of the new origin fixes the translation.
  std::array<double, 3> origin_src{};
  Affine affine = volume.affine;
  for (int t = 0; t < 3; ++t) {
    const int s = perm[t];
    origin_src[s] = reverse[t] ? static_cast<double>(volume.dims[s] - 1) : 0.0;
    Vec3 col = volume.affine.column(s);
    if (reverse[t])
      for (double& x : col) x = -x;
    affine.set_column(t, col);
  }
  affine.set_translation(volume.affine.apply(origin_src[0], origin_src[1], origin_src[2]));
  out.affine = affine;

  out.samples.resize(volume.samples.size());
  std::array<std::size_t, 3> src{};
  for (std::size_t k = 0; k < out.dims[2]; ++k) {
    for (std::size_t j = 0; j < out.dims[1]; ++j) {
      for (std::size_t i = 0; i < out.dims[0]; ++i) {
        const std::size_t dst[3] = {i, j, k};
        for (int t = 0; t < 3; ++t) {
          const int s = perm[t];
          src[s] = reverse[t] ? volume.dims[s] - 1 - dst[t] : dst[t];
        }
        out.at(i, j, k) = volume.at(src[0], src[1], src[2]);
      }
    }
  }
  return out;
}

template <class T>
Volume<T> flip(const Volume<T>& volume, int axis) {
  if (axis < 0 || axis > 2) throw Error(ErrorCode::InvalidArgument, "flip axis must be 0, 1 or 2");
  std::array<bool, 3> reverse{false, false, false};
  reverse[axis] = true;
  return permute_axes(volume, {0, 1, 2}, reverse);
}

template <class T>
Volume<T> reorient(const Volume<T>& volume, const OrientationCode& target) {
  target.validate();
  const OrientationCode current = orientation_of(volume.affine);
  if (current == target) return volume;
  std::array<int, 3> perm{};
  std::array<bool, 3> reverse{};
  for (int t = 0; t < 3; ++t) {
    const int p = physical_axis(target.axes[t]);
    for (int s = 0; s < 3; ++s) {
      if (physical_axis(current.axes[s]) == p) {
        perm[t] = s;
        reverse[t] = current.axes[s] != target.axes[t];
      }
    }
  }
  return permute_axes(volume, perm, reverse);
}

template Volume<float> permute_axes(const Volume<float>&, const std::array<int, 3>&, const std::array<bool, 3>&);
template Volume<std::uint8_t> permute_axes(const Volume<std::uint8_t>&, const std::array<int, 3>&,
                                           const std::array<bool, 3>&);
template Volume<float> flip(const Volume<float>&, int);
template Volume<std::uint8_t> flip(const Volume<std::uint8_t>&, int);
template Volume<float> reorient(const Volume<float>&, const OrientationCode&);
template Volume<std::uint8_t> reorient(const Volume<std::uint8_t>&, const OrientationCode&);

namespace {

struct AxisSample {
  std::size_t lo;
  std::size_t hi;
  double frac;
  std::size_t nearest;
};

// Per-axis lookup: output index o sits at input index o * ratio, clamped.
std::vector<AxisSample> axis_table(std::size_t out_n, std::size_t in_n, double ratio) {
  std::vector<AxisSample> table(out_n);
  const double last = static_cast<double>(in_n - 1);
  for (std::size_t o = 0; o < out_n; ++o) {
    const double x = std::clamp(static_cast<double>(o) * ratio, 0.0, last);
    const auto lo = static_cast<std::size_t>(std::floor(x));
    const std::size_t hi = std::min(lo + 1, in_n - 1);
    const auto nearest = static_cast<std::size_t>(std::min(std::floor(x + 0.5), last));
    table[o] = {lo, hi, x - static_cast<double>(lo), nearest};
  }
  return table;
}

template <class T>
Volume<T> resample_impl(const Volume<T>& volume, const Spacing& target, Interp interp) {
  check_shape(volume);
  target.validate();
  const Spacing current = voxel_spacing(volume.affine);

  Volume<T> out;
  out.source_id = volume.source_id;
  out.affine = volume.affine;
  std::array<double, 3> ratio{};
  for (int a = 0; a < 3; ++a) {
    const double extent = static_cast<double>(volume.dims[a]) * current[a] / target[a];
    out.dims[a] = static_cast<std::size_t>(std::max(1.0, std::round(extent)));
    ratio[a] = target[a] / current[a];
    Vec3 col = volume.affine.column(a);
    for (double& x : col) x = x / current[a] * target[a];
    out.affine.set_column(a, col);
  }
  const auto tx = axis_table(out.dims[0], volume.dims[0], ratio[0]);
  const auto ty = axis_table(out.dims[1], volume.dims[1], ratio[1]);
  const auto tz = axis_table(out.dims[2], volume.dims[2], ratio[2]);

  out.samples.resize(out.size());
  for (std::size_t k = 0; k < out.dims[2]; ++k) {
    const AxisSample& z = tz[k];
    for (std::size_t j = 0; j < out.dims[1]; ++j) {
      const AxisSample& y = ty[j];
      for (std::size_t i = 0; i < out.dims[0]; ++i) {
        const AxisSample& x = tx[i];
        if (interp == Interp::Nearest) {
          out.at(i, j, k) = volume.at(x.nearest, y.nearest, z.nearest);
          continue;
        }
        auto v = [&](std::size_t a, std::size_t b, std::size_t c) {
          return static_cast<double>(volume.at(a, b, c));
        };
        const double c00 = v(x.lo, y.lo, z.lo) * (1 - x.frac) + v(x.hi, y.lo, z.lo) * x.frac;
        const double c10 = v(x.lo, y.hi, z.lo) * (1 - x.frac) + v(x.hi, y.hi, z.lo) * x.frac;
        const double c01 = v(x.lo, y.lo, z.hi) * (1 - x.frac) + v(x.hi, y.lo, z.hi) * x.frac;
        const double c11 = v(x.lo, y.hi, z.hi) * (1 - x.frac) + v(x.hi, y.hi, z.hi) * x.frac;
        const double c0 = c00 * (1 - y.frac) + c10 * y.frac;
        const double c1 = c01 * (1 - y.frac) + c11 * y.frac;
        out.at(i, j, k) = static_cast<T>(c0 * (1 - z.frac) + c1 * z.frac);
      }
    }
  }
  return out;
}

}  // namespace

CtVolume resample(const CtVolume& volume, const Spacing& target, Interp interp) {
  return resample_impl(volume, target, interp);
}

MaskVolume resample(const MaskVolume& volume, const Spacing& target, Interp interp) {
  if (interp != Interp::Nearest)
    throw Error(ErrorCode::InvalidArgument, "masks must be resampled with nearest-neighbour interpolation");
  return resample_impl(volume, target, interp);
}

}  // namespace sarco
