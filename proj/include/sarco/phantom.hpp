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

// Synthetic CT with an elliptical muscle ring of analytically known area.

#ifndef SARCO_PHANTOM_HPP
#define SARCO_PHANTOM_HPP

#include <cstdint>

#include "sarco/types.hpp"

namespace sarco {

struct PhantomSpec {
  Dims dims{160, 128, 3};
  Spacing spacing{1.0, 1.0, 1.0};
  double outer_a_mm = 60.0;  // semi-axis along volume axis 0
  double outer_b_mm = 40.0;  // semi-axis along volume axis 1
  double ring_thickness_mm = 10.0;
  double muscle_hu = 50.0;
  double interior_hu = -100.0;
  double background_hu = -1000.0;
  std::size_t annotated_slice = 1;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  /// Also checks muscle_hu lies inside [muscle_lo, muscle_hi] and the
  /// interior/background values outside it.
  void validate(double muscle_lo = -29.0, double muscle_hi = 150.0) const;
};

struct Phantom {
  CtVolume ct;
  MaskVolume mask;
  double analytic_area_cm2 = 0.0;
};

/// pi * (a*b - (a-t)*(b-t)) / 100
double analytic_ring_area_cm2(const PhantomSpec& spec);

/// Voxel centres inside the outer ellipse and outside the inner one form
/// the muscle ring on the annotated slice. The volume is centred on the
/// world origin with a diagonal (RAS) affine. Noise touches the CT only.
Phantom generate_phantom(const PhantomSpec& spec);

}  // namespace sarco

#endif  // SARCO_PHANTOM_HPP
