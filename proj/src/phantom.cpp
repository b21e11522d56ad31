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

#include "sarco/phantom.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sarco/error.hpp"

namespace sarco {

void PhantomSpec::validate(double muscle_lo, double muscle_hi) const {
  spacing.validate();
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) throw Error(ErrorCode::InvalidArgument, "phantom dims must be positive");
  if (!(outer_a_mm > 0) || !(outer_b_mm > 0) || !(ring_thickness_mm > 0))
    throw Error(ErrorCode::InvalidArgument, "semi-axes and ring thickness must be positive");
  if (!(outer_a_mm - ring_thickness_mm > 0) || !(outer_b_mm - ring_thickness_mm > 0))
    throw Error(ErrorCode::InvalidArgument, "ring thickness must be smaller than both semi-axes");
  if (annotated_slice >= dims[2]) throw Error(ErrorCode::InvalidArgument, "annotated slice out of range");
  if (!(noise_sd >= 0) || !std::isfinite(noise_sd)) throw Error(ErrorCode::InvalidArgument, "noise sd must be >= 0");
  auto in_window = [&](double hu) { return hu >= muscle_lo && hu <= muscle_hi; };
  if (!in_window(muscle_hu)) throw Error(ErrorCode::InvalidArgument, "muscle HU must lie inside the muscle window");
  if (in_window(interior_hu) || in_window(background_hu))
    throw Error(ErrorCode::InvalidArgument, "interior and background HU must lie outside the muscle window");
}

double analytic_ring_area_cm2(const PhantomSpec& spec) {
  const double a = spec.outer_a_mm;
  const double b = spec.outer_b_mm;
  const double t = spec.ring_thickness_mm;
  return std::numbers::pi * (a * b - (a - t) * (b - t)) / 100.0;
}

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  const Dims& d = spec.dims;
  const Vec3 scale{spec.spacing.sx, spec.spacing.sy, spec.spacing.sz};
  Vec3 origin{};
  for (int a = 0; a < 3; ++a) origin[a] = -(static_cast<double>(d[a]) - 1.0) / 2.0 * scale[a];

  Phantom p;
  p.analytic_area_cm2 = analytic_ring_area_cm2(spec);
  p.ct.dims = d;
  p.ct.affine = Affine::diagonal(scale, origin);
  p.ct.samples.assign(p.ct.size(), static_cast<float>(spec.background_hu));
  p.ct.source_id = "phantom";
  p.mask.dims = d;
  p.mask.affine = p.ct.affine;
  p.mask.samples.assign(p.mask.size(), 0);
  p.mask.source_id = "phantom";

  const double a = spec.outer_a_mm;
  const double b = spec.outer_b_mm;
  const double ai = a - spec.ring_thickness_mm;
  const double bi = b - spec.ring_thickness_mm;
  const std::size_t k = spec.annotated_slice;
  for (std::size_t j = 0; j < d[1]; ++j) {
    const double y = origin[1] + static_cast<double>(j) * scale[1];
    for (std::size_t i = 0; i < d[0]; ++i) {
      const double x = origin[0] + static_cast<double>(i) * scale[0];
      const bool in_outer = (x / a) * (x / a) + (y / b) * (y / b) <= 1.0;
      if (!in_outer) continue;
      const bool in_inner = (x / ai) * (x / ai) + (y / bi) * (y / bi) <= 1.0;
      p.ct.at(i, j, k) = static_cast<float>(in_inner ? spec.interior_hu : spec.muscle_hu);
      if (!in_inner) p.mask.at(i, j, k) = 1;
    }
  }

  if (spec.noise_sd > 0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);
    for (float& s : p.ct.samples) s = static_cast<float>(s + noise(rng));
  }
  return p;
}

}  // namespace sarco
