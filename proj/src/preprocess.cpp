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

#include "sarco/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sarco/error.hpp"

namespace sarco {

void HuWindow::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw Error(ErrorCode::InvalidArgument, "HU window requires lo < hi");
}

CtVolume clip_hu(const CtVolume& volume, const HuWindow& window) {
  window.validate();
  CtVolume out = volume;
  const auto lo = static_cast<float>(window.lo);
  const auto hi = static_cast<float>(window.hi);
  for (float& s : out.samples) s = std::clamp(s, lo, hi);
  return out;
}

CtVolume normalize_unit(const CtVolume& volume, const HuWindow& window) {
  CtVolume out = clip_hu(volume, window);
  const double width = window.hi - window.lo;
  for (float& s : out.samples) s = static_cast<float>((static_cast<double>(s) - window.lo) / width);
  return out;
}

namespace {

template <class T>
Volume<T> copy_block(const Volume<T>& src, const Dims& out_dims, const std::array<std::ptrdiff_t, 3>& shift,
                     T fill) {
  // out(i) = src(i + shift) where in range, else fill.
  Volume<T> out;
  out.dims = out_dims;
  out.source_id = src.source_id;
  out.samples.assign(out.size(), fill);
  out.affine = src.affine;
  out.affine.set_translation(src.affine.apply(static_cast<double>(shift[0]), static_cast<double>(shift[1]),
                                              static_cast<double>(shift[2])));
  for (std::size_t k = 0; k < out_dims[2]; ++k) {
    const std::ptrdiff_t sk = static_cast<std::ptrdiff_t>(k) + shift[2];
    if (sk < 0 || sk >= static_cast<std::ptrdiff_t>(src.dims[2])) continue;
    for (std::size_t j = 0; j < out_dims[1]; ++j) {
      const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j) + shift[1];
      if (sj < 0 || sj >= static_cast<std::ptrdiff_t>(src.dims[1])) continue;
      for (std::size_t i = 0; i < out_dims[0]; ++i) {
        const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i) + shift[0];
        if (si < 0 || si >= static_cast<std::ptrdiff_t>(src.dims[0])) continue;
        out.at(i, j, k) = src.at(static_cast<std::size_t>(si), static_cast<std::size_t>(sj),
                                 static_cast<std::size_t>(sk));
      }
    }
  }
  return out;
}

}  // namespace

template <class T>
Volume<T> pad(const Volume<T>& volume, const Dims& target, T fill) {
  check_shape(volume);
  std::array<std::ptrdiff_t, 3> shift{};
  for (int a = 0; a < 3; ++a) {
    if (target[a] < volume.dims[a])
      throw Error(ErrorCode::TargetBelowDims, "pad target smaller than axis " + std::to_string(a));
    shift[a] = -static_cast<std::ptrdiff_t>((target[a] - volume.dims[a]) / 2);
  }
  return copy_block(volume, target, shift, fill);
}

template <class T>
Volume<T> crop(const Volume<T>& volume, const Dims& target) {
  check_shape(volume);
  std::array<std::ptrdiff_t, 3> shift{};
  for (int a = 0; a < 3; ++a) {
    if (target[a] == 0) throw Error(ErrorCode::InvalidArgument, "crop target must be >= 1");
    if (target[a] > volume.dims[a])
      throw Error(ErrorCode::TargetExceedsDims, "crop target larger than axis " + std::to_string(a));
    shift[a] = static_cast<std::ptrdiff_t>((volume.dims[a] - target[a]) / 2);
  }
  return copy_block(volume, target, shift, T{});
}

template Volume<float> pad(const Volume<float>&, const Dims&, float);
template Volume<std::uint8_t> pad(const Volume<std::uint8_t>&, const Dims&, std::uint8_t);
template Volume<float> crop(const Volume<float>&, const Dims&);
template Volume<std::uint8_t> crop(const Volume<std::uint8_t>&, const Dims&);

namespace {

template <class T>
Volume<T> rotate_impl(const Volume<T>& volume, double degrees, Interp interp, T fill) {
  check_shape(volume);
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = (static_cast<double>(volume.dims[0]) - 1.0) / 2.0;
  const double cy = (static_cast<double>(volume.dims[1]) - 1.0) / 2.0;
  const double max_x = static_cast<double>(volume.dims[0] - 1);
  const double max_y = static_cast<double>(volume.dims[1] - 1);
  constexpr double kSlack = 1e-6;

  Volume<T> out = volume;
  for (std::size_t j = 0; j < volume.dims[1]; ++j) {
    for (std::size_t i = 0; i < volume.dims[0]; ++i) {
      const double dx = static_cast<double>(i) - cx;
      const double dy = static_cast<double>(j) - cy;
      double sx = c * dx + s * dy + cx;
      double sy = -s * dx + c * dy + cy;
      const bool inside = sx >= -kSlack && sx <= max_x + kSlack && sy >= -kSlack && sy <= max_y + kSlack;
      sx = std::clamp(sx, 0.0, max_x);
      sy = std::clamp(sy, 0.0, max_y);
      for (std::size_t k = 0; k < volume.dims[2]; ++k) {
        if (!inside) {
          out.at(i, j, k) = fill;
          continue;
        }
        if (interp == Interp::Nearest) {
          out.at(i, j, k) = volume.at(static_cast<std::size_t>(std::floor(sx + 0.5)),
                                      static_cast<std::size_t>(std::floor(sy + 0.5)), k);
          continue;
        }
        const auto x0 = static_cast<std::size_t>(std::floor(sx));
        const auto y0 = static_cast<std::size_t>(std::floor(sy));
        const std::size_t x1 = std::min(x0 + 1, volume.dims[0] - 1);
        const std::size_t y1 = std::min(y0 + 1, volume.dims[1] - 1);
        const double fx = sx - static_cast<double>(x0);
        const double fy = sy - static_cast<double>(y0);
        const double top = volume.at(x0, y0, k) * (1 - fx) + volume.at(x1, y0, k) * fx;
        const double bottom = volume.at(x0, y1, k) * (1 - fx) + volume.at(x1, y1, k) * fx;
        out.at(i, j, k) = static_cast<T>(top * (1 - fy) + bottom * fy);
      }
    }
  }
  return out;
}

}  // namespace

CtVolume rotate_inplane(const CtVolume& volume, double degrees, Interp interp, float fill) {
  return rotate_impl(volume, degrees, interp, fill);
}

MaskVolume rotate_inplane(const MaskVolume& volume, double degrees, Interp interp, std::uint8_t fill) {
  if (interp != Interp::Nearest)
    throw Error(ErrorCode::InvalidArgument, "masks must be rotated with nearest-neighbour interpolation");
  if (fill > 1) throw Error(ErrorCode::InvalidArgument, "mask fill must be 0 or 1");
  return rotate_impl(volume, degrees, interp, fill);
}

AugmentParams sample_augmentation(std::mt19937_64& rng, const AugmentConfig& config) {
  std::uniform_real_distribution<double> angle(-config.max_rotation_deg, config.max_rotation_deg);
  std::bernoulli_distribution coin(config.flip_probability);
  AugmentParams p;
  p.rotation_deg = angle(rng);
  p.flip_x = coin(rng);
  p.flip_y = coin(rng);
  p.crop_x = config.crop_x;
  p.crop_y = config.crop_y;
  return p;
}

namespace {

template <class T>
Volume<T> flip_pad_crop(Volume<T> v, const AugmentParams& params, T fill) {
  if (params.flip_x) v = flip(v, 0);
  if (params.flip_y) v = flip(v, 1);
  const Dims padded{std::max(v.dims[0], params.crop_x), std::max(v.dims[1], params.crop_y), v.dims[2]};
  if (padded != v.dims) v = pad(v, padded, fill);
  return crop(v, Dims{params.crop_x, params.crop_y, v.dims[2]});
}

}  // namespace

CtVolume augment(const CtVolume& volume, const AugmentParams& params, float fill) {
  return flip_pad_crop(rotate_inplane(volume, params.rotation_deg, Interp::Trilinear, fill), params, fill);
}

MaskVolume augment(const MaskVolume& volume, const AugmentParams& params) {
  return flip_pad_crop(rotate_inplane(volume, params.rotation_deg), params, std::uint8_t{0});
}

}  // namespace sarco
