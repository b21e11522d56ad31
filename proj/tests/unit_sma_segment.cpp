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
#include "sarco/geometry.hpp"
#include "sarco/metrics.hpp"
#include "sarco/phantom.hpp"
#include "sarco/segment.hpp"
#include "sarco/sma.hpp"
#include "support.hpp"

using namespace sarco;
using sarco::test::code_of;

namespace {

MaskVolume empty_mask(Dims d, Affine a = Affine()) {
  MaskVolume m;
  m.dims = d;
  m.affine = a;
  m.samples.assign(m.size(), 0);
  return m;
}

SliceImage disk_slice(std::size_t n, double radius, float inside, float outside) {
  SliceImage s(n, n, outside);
  const double c = (static_cast<double>(n) - 1) / 2;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if ((i - c) * (i - c) + (j - c) * (j - c) <= radius * radius) s.at(i, j) = inside;
  return s;
}

}  // namespace

TEST_SUITE("sma_assess") {
  TEST_CASE("annotated_slice_index") {
    MaskVolume m = empty_mask({4, 4, 50});
    CHECK(code_of([&] { annotated_slice_index(m); }) == ErrorCode::EmptyMask);
    m.at(1, 2, 37) = 1;
    CHECK(annotated_slice_index(m) == 37);
    m.at(0, 0, 38) = 1;
    CHECK(code_of([&] { annotated_slice_index(m); }) == ErrorCode::MultipleAnnotatedSlices);
  }

  TEST_CASE("annotated slice follows the axial axis, not the third index") {
    // Columns: x, z, y. The axial axis is volume axis 1.
    Affine a;
    a.set_column(1, {0, 0, 2.0});
    a.set_column(2, {0, 0.5, 0});
    MaskVolume m = empty_mask({3, 6, 4}, a);
    m.at(0, 4, 0) = 1;
    m.at(2, 4, 3) = 1;
    CHECK(annotated_slice_index(m) == 4);
    const SmaMeasurement s = compute_sma(m, 4);
    CHECK(s.pixel_count == 2);
    CHECK(s.pixel_area_mm2 == doctest::Approx(0.5));
  }

  TEST_CASE("compute_sma arithmetic") {
    MaskVolume m = empty_mask({100, 100, 1}, Affine::diagonal({0.8, 0.8, 3.0}));
    std::fill(m.samples.begin(), m.samples.end(), 1);
    const SmaMeasurement s = compute_sma(m, 0);
    CHECK(s.pixel_count == 10000);
    CHECK(s.area_cm2 == doctest::Approx(64.0));
    MaskVolume one = empty_mask({1, 1, 1});
    one.samples[0] = 1;
    CHECK(compute_sma(one, 0).area_cm2 == doctest::Approx(0.01));
  }

  TEST_CASE("slice policies") {
    MaskVolume m = empty_mask({3, 3, 4});
    m.at(0, 0, 1) = 1;
    m.at(0, 0, 2) = 1;
    m.at(1, 0, 2) = 1;
    m.at(0, 0, 3) = 1;
    m.at(1, 1, 3) = 1;
    CHECK(code_of([&] { measure(m, SlicePolicy::parse("single")); }) == ErrorCode::MultipleAnnotatedSlices);
    const SmaMeasurement sum = measure(m, SlicePolicy::parse("sum"));
    CHECK(sum.pixel_count == 5);
    CHECK(sum.slice_index == -1);
    const SmaMeasurement largest = measure(m, SlicePolicy::parse("largest"));
    CHECK(largest.slice_index == 2);
    CHECK(largest.pixel_count == 2);
    const SmaMeasurement idx = measure(m, SlicePolicy::parse("index=1"));
    CHECK(idx.pixel_count == 1);
    CHECK(code_of([&] { measure(m, SlicePolicy::parse("index=9")); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { SlicePolicy::parse("median"); }) == ErrorCode::InvalidArgument);
    CHECK(SlicePolicy::parse("index=3").str() == "index=3");
  }

  TEST_CASE("classify") {
    CHECK(classify(143.6, Sex::Male).sarcopenic);
    CHECK_FALSE(classify(144.0, Sex::Male).sarcopenic);
    CHECK_FALSE(classify(97.18, Sex::Female).sarcopenic);
    CHECK(classify(91.99, Sex::Female).sarcopenic);
    CHECK(classify(100.0, Sex::Female).cutoff_cm2 == 92.0);
    CHECK(classify(100.0, Sex::Male, {150.0, 92.0}).cutoff_cm2 == 150.0);
    CHECK(code_of([] { classify(-1.0, Sex::Male); }) == ErrorCode::InvalidArgument);
    CHECK(parse_sex("Female") == Sex::Female);
    CHECK(parse_sex("M") == Sex::Male);
    CHECK(code_of([] { parse_sex("unknown"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("area is unchanged by reorientation") {
    std::mt19937_64 rng(21);
    MaskVolume m = empty_mask({12, 9, 5}, Affine::diagonal({-0.7, 0.9, 2.5}, {3, 4, 5}));
    for (std::size_t j = 0; j < 9; ++j)
      for (std::size_t i = 0; i < 12; ++i) m.at(i, j, 3) = (i * 7 + j * 3) % 5 < 2;
    const SmaMeasurement a = measure(m, {});
    const MaskVolume r = reorient(m, OrientationCode::parse("SPR"));
    const SmaMeasurement b = measure(r, {});
    CHECK(a.pixel_count == b.pixel_count);
    CHECK(a.area_cm2 == doctest::Approx(b.area_cm2).epsilon(1e-12));
  }
}

TEST_SUITE("baseline_seg") {
  TEST_CASE("all-air slice is empty") {
    const SliceImage air(32, 32, -1000.0f);
    CHECK(code_of([&] { segment_slice(air, 1.0); }) == ErrorCode::EmptySlice);
  }

  TEST_CASE("uniform disk loses at most a one-pixel rim") {
    const SliceImage s = disk_slice(64, 20.0, 50.0f, -1000.0f);
    const MaskSlice seg = segment_slice(s, 1.0);
    MaskSlice thresh(64, 64, 0);
    for (std::size_t n = 0; n < s.data.size(); ++n) thresh.data[n] = s.data[n] == 50.0f;
    std::size_t removed = 0;
    for (std::size_t j = 0; j < 64; ++j)
      for (std::size_t i = 0; i < 64; ++i) {
        CHECK(seg.at(i, j) <= thresh.at(i, j));
        if (thresh.at(i, j) && !seg.at(i, j)) {
          ++removed;
          // Every removed pixel touches the background.
          const bool rim = !thresh.at(i - 1, j) || !thresh.at(i + 1, j) || !thresh.at(i, j - 1) || !thresh.at(i, j + 1);
          CHECK(rim);
        }
      }
    CHECK(removed < 0.1 * std::count(thresh.data.begin(), thresh.data.end(), 1));
  }

  TEST_CASE("phantom slice reaches Dice 0.95") {
    const Phantom p = generate_phantom(PhantomSpec{});
    const MaskVolume seg = segment_volume(p.ct, 1);
    CHECK(dice(seg, p.mask) >= 0.95);
  }

  TEST_CASE("output only removes candidate pixels and grows smaller with the size threshold") {
    std::mt19937_64 rng(31);
    SliceImage s(48, 48, -1000.0f);
    std::uniform_real_distribution<float> hu(-200.0f, 250.0f);
    for (std::size_t j = 4; j < 44; ++j)
      for (std::size_t i = 4; i < 44; ++i) s.at(i, j) = hu(rng);
    SegParams small;
    small.min_component_mm2 = 2.0;
    small.opening_radius_px = 0;
    SegParams large = small;
    large.min_component_mm2 = 40.0;
    const MaskSlice a = segment_slice(s, 1.0, small);
    const MaskSlice b = segment_slice(s, 1.0, large);
    for (std::size_t n = 0; n < a.data.size(); ++n) {
      CHECK(b.data[n] <= a.data[n]);
      if (a.data[n]) CHECK((s.data[n] >= -29.0f && s.data[n] <= 150.0f));
    }
  }

  TEST_CASE("segmenting its own output is stable") {
    const Phantom p = generate_phantom(PhantomSpec{});
    const MaskVolume first = segment_volume(p.ct, 1);
    CtVolume as_image = p.ct;
    for (std::size_t n = 0; n < as_image.size(); ++n) as_image.samples[n] = first.samples[n] ? 50.0f : -1000.0f;
    const MaskVolume second = segment_volume(as_image, 1);
    CHECK(second.samples == first.samples);
  }

  TEST_CASE("components are 4-connected") {
    MaskSlice m(3, 3, 0);
    m.at(0, 0) = 1;
    m.at(1, 1) = 1;
    m.at(2, 1) = 1;
    const Components c = label_components(m);
    CHECK(c.sizes.size() == 3);
    CHECK(c.sizes[1] == 1);
    CHECK(c.sizes[2] == 2);
  }

  TEST_CASE("seg params validate") {
    SegParams p;
    p.muscle_window = {10, 10};
    CHECK(code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
    SegParams q;
    q.min_component_mm2 = 0;
    CHECK(code_of([&] { q.validate(); }) == ErrorCode::InvalidArgument);
  }
}

TEST_SUITE("phantom") {
  TEST_CASE("default ring: analytic 28.274 cm2, raster within 2%") {
    const Phantom p = generate_phantom(PhantomSpec{});
    CHECK(p.analytic_area_cm2 == doctest::Approx(28.274).epsilon(1e-4));
    const SmaMeasurement s = measure(p.mask, {});
    CHECK(s.slice_index == 1);
    CHECK(std::abs(s.area_cm2 - p.analytic_area_cm2) / p.analytic_area_cm2 < 0.02);
  }

  TEST_CASE("mask equals the voxel-centre rasterization") {
    PhantomSpec spec;
    const Phantom p = generate_phantom(spec);
    for (std::size_t k = 0; k < spec.dims[2]; ++k)
      for (std::size_t j = 0; j < spec.dims[1]; ++j)
        for (std::size_t i = 0; i < spec.dims[0]; ++i) {
          const Vec3 x = p.mask.affine.apply(i, j, k);
          const double a = spec.outer_a_mm, b = spec.outer_b_mm, t = spec.ring_thickness_mm;
          const bool outer = (x[0] / a) * (x[0] / a) + (x[1] / b) * (x[1] / b) <= 1.0;
          const bool inner = (x[0] / (a - t)) * (x[0] / (a - t)) + (x[1] / (b - t)) * (x[1] / (b - t)) <= 1.0;
          const bool want = k == spec.annotated_slice && outer && !inner;
          CHECK(p.mask.at(i, j, k) == (want ? 1 : 0));
        }
  }

  TEST_CASE("invalid specs are rejected") {
    PhantomSpec s;
    s.ring_thickness_mm = 40;
    CHECK(code_of([&] { generate_phantom(s); }) == ErrorCode::InvalidArgument);
    PhantomSpec t;
    t.annotated_slice = 3;
    CHECK(code_of([&] { generate_phantom(t); }) == ErrorCode::InvalidArgument);
    PhantomSpec u;
    u.muscle_hu = 300;
    CHECK(code_of([&] { generate_phantom(u); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("noise is seeded and never touches the mask") {
    PhantomSpec s;
    s.noise_sd = 15;
    s.seed = 5;
    const Phantom a = generate_phantom(s);
    const Phantom b = generate_phantom(s);
    CHECK(a.ct.samples == b.ct.samples);
    CHECK(a.mask.samples == generate_phantom(PhantomSpec{}).mask.samples);
    s.seed = 6;
    CHECK(generate_phantom(s).ct.samples != a.ct.samples);
  }

  TEST_CASE("raster error shrinks as the spacing halves") {
    double previous = 1.0;
    for (double h : {2.0, 1.0, 0.5}) {
      PhantomSpec s;
      s.outer_a_mm = 50;
      s.outer_b_mm = 35;
      s.ring_thickness_mm = 12;
      s.spacing = {h, h, 1.0};
      s.dims = {static_cast<std::size_t>(std::lround((2 * s.outer_a_mm + 40) / h)),
                static_cast<std::size_t>(std::lround((2 * s.outer_b_mm + 40) / h)), 3};
      const Phantom p = generate_phantom(s);
      const double err = std::abs(measure(p.mask, {}).area_cm2 - p.analytic_area_cm2) / p.analytic_area_cm2;
      CAPTURE(h);
      CHECK(err < previous);
      previous = err;
    }
  }
}
