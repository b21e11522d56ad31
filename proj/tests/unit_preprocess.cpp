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

#include <algorithm>

#include "doctest.h"
#include "sarco/preprocess.hpp"
#include "support.hpp"

using namespace sarco;
using sarco::test::code_of;

namespace {

CtVolume column(std::vector<float> values) {
  CtVolume v;
  v.dims = {values.size(), 1, 1};
  v.samples = std::move(values);
  return v;
}

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("clip_hu") {
    const CtVolume c = clip_hu(column({300, -1000, 100}));
    CHECK(c.samples == std::vector<float>{250, -175, 100});
    CHECK(clip_hu(c).samples == c.samples);
  }

  TEST_CASE("normalize_unit") {
    const CtVolume n = normalize_unit(column({-175, 250, 37.5f, -2000, 4000}));
    CHECK(n.samples[0] == 0.0f);
    CHECK(n.samples[1] == 1.0f);
    CHECK(n.samples[2] == doctest::Approx(0.5));
    CHECK(n.samples[3] == 0.0f);
    CHECK(n.samples[4] == 1.0f);
    const CtVolume zero = normalize_unit(column({-175, -175, -175}));
    for (float s : zero.samples) CHECK(s == 0.0f);
  }

  TEST_CASE("window must be ordered") {
    CHECK(code_of([] { clip_hu(column({0}), {10, 10}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { normalize_unit(column({0}), {10, -10}); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("pad (2,2,1) to (4,4,1) with -1000") {
    CtVolume v;
    v.dims = {2, 2, 1};
    v.samples = {1, 2, 3, 4};
    v.affine = Affine::diagonal({0.5, 0.5, 1}, {10, 20, 30});
    const CtVolume p = pad(v, {4, 4, 1}, -1000.0f);
    CHECK(p.at(1, 1, 0) == 1);
    CHECK(p.at(2, 1, 0) == 2);
    CHECK(p.at(1, 2, 0) == 3);
    CHECK(p.at(2, 2, 0) == 4);
    CHECK(std::count(p.samples.begin(), p.samples.end(), -1000.0f) == 12);
    CHECK(p.affine.apply(1, 1, 0) == v.affine.apply(0, 0, 0));
  }

  TEST_CASE("odd padding puts the extra voxel on the high side") {
    const CtVolume p = pad(column({7}), {4, 1, 1}, 0.0f);
    CHECK(p.samples == std::vector<float>{0, 7, 0, 0});
  }

  TEST_CASE("crop takes the centred block") {
    const CtVolume c = crop(column({0, 1, 2, 3, 4}), {2, 1, 1});
    CHECK(c.samples == std::vector<float>{1, 2});
    CHECK(c.affine.apply(0, 0, 0) == Affine().apply(1, 0, 0));
  }

  TEST_CASE("pad and crop reject the wrong direction") {
    CHECK(code_of([] { pad(column({1, 2, 3}), {2, 1, 1}, 0.0f); }) == ErrorCode::TargetBelowDims);
    CHECK(code_of([] { crop(column({1, 2, 3}), {4, 1, 1}); }) == ErrorCode::TargetExceedsDims);
  }

  TEST_CASE("crop(pad(v)) recovers v") {
    std::mt19937_64 rng(9);
    const CtVolume v = test::random_ct(rng, {5, 4, 2}, Affine::diagonal({0.5, 0.5, 2}, {1, 2, 3}));
    const CtVolume back = crop(pad(v, {9, 8, 3}, -1000.0f), v.dims);
    CHECK(back.samples == v.samples);
    CHECK(back.affine.approx_equal(v.affine, 1e-12));
  }

  TEST_CASE("rotate by 0 degrees is the identity") {
    std::mt19937_64 rng(10);
    const CtVolume v = test::random_ct(rng, {6, 5, 2}, Affine());
    const CtVolume r = rotate_inplane(v, 0.0, Interp::Trilinear, -1000.0f);
    for (std::size_t n = 0; n < v.size(); ++n) CHECK(r.samples[n] == doctest::Approx(v.samples[n]).epsilon(1e-6));
  }

  TEST_CASE("rotate by 90 degrees on a square slice is an index shuffle") {
    std::mt19937_64 rng(11);
    const CtVolume v = test::random_ct(rng, {5, 5, 2}, Affine());
    const CtVolume r = rotate_inplane(v, 90.0, Interp::Trilinear, -1000.0f);
    // Output (i, j) samples the source at (cx + dy, cy - dx) about centre (2, 2).
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t i = 0; i < 5; ++i)
          CHECK(r.at(i, j, k) == doctest::Approx(v.at(j, 4 - i, k)).epsilon(1e-6));
  }

  TEST_CASE("mask rotation stays binary and only accepts nearest") {
    std::mt19937_64 rng(12);
    const MaskVolume m = test::random_mask(rng, {9, 7, 1}, Affine());
    const MaskVolume r = rotate_inplane(m, 23.0);
    for (auto s : r.samples) CHECK((s == 0 || s == 1));
    CHECK(code_of([&] { rotate_inplane(m, 10.0, Interp::Trilinear); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("augmentation sampler is seeded and bounded") {
    AugmentConfig cfg;
    std::mt19937_64 a(77), b(77);
    for (int n = 0; n < 50; ++n) {
      const AugmentParams pa = sample_augmentation(a, cfg);
      const AugmentParams pb = sample_augmentation(b, cfg);
      CHECK(pa.rotation_deg == pb.rotation_deg);
      CHECK(pa.flip_x == pb.flip_x);
      CHECK(std::abs(pa.rotation_deg) <= cfg.max_rotation_deg);
      CHECK(pa.crop_x == 192);
      CHECK(pa.crop_y == 192);
    }
  }

  TEST_CASE("augment produces the crop extent and keeps masks binary") {
    std::mt19937_64 rng(13);
    const CtVolume v = test::random_ct(rng, {40, 30, 2}, Affine());
    const MaskVolume m = test::random_mask(rng, {40, 30, 2}, Affine());
    AugmentParams p;
    p.rotation_deg = 7.0;
    p.flip_x = true;
    p.crop_x = 32;
    p.crop_y = 32;
    const CtVolume av = augment(v, p, -175.0f);
    const MaskVolume am = augment(m, p);
    CHECK(av.dims == Dims{32, 32, 2});
    CHECK(am.dims == Dims{32, 32, 2});
    for (auto s : am.samples) CHECK((s == 0 || s == 1));
  }
}
