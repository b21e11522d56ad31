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
#include <numbers>

#include "doctest.h"
#include "sarco/geometry.hpp"
#include "sarco/nifti.hpp"
#include "sarco/phantom.hpp"
#include "support.hpp"

using namespace sarco;
using sarco::test::code_of;

namespace {

Affine from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2, const Vec3& t = {0, 0, 0}) {
  Affine a;
  a.set_column(0, c0);
  a.set_column(1, c1);
  a.set_column(2, c2);
  a.set_translation(t);
  return a;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("orientation_of") {
    CHECK(orientation_of(Affine()).str() == "RAS");
    CHECK(orientation_of(Affine::diagonal({-0.8, 0.8, 3.0})).str() == "LAS");
    CHECK(orientation_of(from_columns({0, 0, 2}, {0.7, 0, 0}, {0, -0.7, 0})).str() == "SRP");
    const double h = std::sqrt(0.5);
    CHECK(code_of([&] { orientation_of(from_columns({h, h, 0}, {-h, h, 0}, {0, 0, 1})); }) ==
          ErrorCode::AmbiguousOrientation);
    CHECK(code_of([&] { orientation_of(from_columns({1, 0.1, 0}, {0.9, 0.2, 0}, {0, 0, 1})); }) ==
          ErrorCode::AmbiguousOrientation);
  }

  TEST_CASE("LAS fixture file reads as LAS") {
    const CtVolume v = nifti::load_ct(test::data_dir() / "nifti" / "las_i16_scaled.nii.gz");
    CHECK(orientation_of(v.affine).str() == "LAS");
  }

  TEST_CASE("orientation code parsing") {
    CHECK(OrientationCode::parse("lps").str() == "LPS");
    CHECK(code_of([] { OrientationCode::parse("RRS"); }) != ErrorCode::Ok);
    CHECK(code_of([] { OrientationCode::parse("RA"); }) != ErrorCode::Ok);
    CHECK(code_of([] { OrientationCode::parse("RAX"); }) != ErrorCode::Ok);
  }

  TEST_CASE("voxel_spacing") {
    const Spacing s = voxel_spacing(Affine::diagonal({0.8, 0.8, 3.0}));
    CHECK(s.sx == doctest::Approx(0.8));
    CHECK(s.sz == doctest::Approx(3.0));
    const double c = std::cos(0.4), sn = std::sin(0.4);
    const Spacing r = voxel_spacing(from_columns({2 * c, 2 * sn, 0}, {-2 * sn, 2 * c, 0}, {0, 0, 2}));
    CHECK(r.sx == doctest::Approx(2.0));
    CHECK(r.sy == doctest::Approx(2.0));
    CHECK(r.sz == doctest::Approx(2.0));
    const Spacing one = voxel_spacing(Affine());
    CHECK((one.sx == 1.0 && one.sy == 1.0 && one.sz == 1.0));
  }

  TEST_CASE("slice_pixel_area") {
    CHECK(slice_pixel_area(Affine::diagonal({0.8, 0.8, 3.0}), 2) == doctest::Approx(0.64));
    const double t = std::numbers::pi / 6;
    const Affine rot = from_columns({0.8 * std::cos(t), 0.8 * std::sin(t), 0}, {-0.8 * std::sin(t), 0.8 * std::cos(t), 0},
                                    {0, 0, 3});
    CHECK(slice_pixel_area(rot, 2) == doctest::Approx(0.64));
    CHECK(slice_pixel_area(Affine(), 0) == 1.0);
  }

  TEST_CASE("reorient LAS (4,4,2) to RAS") {
    CtVolume v;
    v.dims = {4, 4, 2};
    v.affine = Affine::diagonal({-1, 1, 1}, {3, 0, 0});
    v.samples.resize(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) v.samples[n] = static_cast<float>(n);
    const CtVolume r = reorient(v, OrientationCode::parse("RAS"));
    CHECK(r.affine.approx_equal(Affine::diagonal({1, 1, 1}, {0, 0, 0}), 0.0));
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) {
          CHECK(r.at(3 - i, j, k) == v.at(i, j, k));
          CHECK(r.affine.apply(3.0 - i, j, k) == v.affine.apply(i, j, k));
        }
  }

  TEST_CASE("reorient identity and idempotence") {
    std::mt19937_64 rng(3);
    const CtVolume v = test::random_ct(rng, {3, 4, 5}, Affine::diagonal({0.5, 0.7, 2.0}, {1, 2, 3}));
    const CtVolume same = reorient(v, OrientationCode::parse("RAS"));
    CHECK(same.samples == v.samples);
    CHECK(same.affine.approx_equal(v.affine, 0.0));
    const CtVolume psr = reorient(v, OrientationCode::parse("PSR"));
    CHECK(orientation_of(psr.affine).str() == "PSR");
    const CtVolume twice = reorient(psr, OrientationCode::parse("PSR"));
    CHECK(twice.samples == psr.samples);
    CHECK(twice.affine.approx_equal(psr.affine, 0.0));
  }

  TEST_CASE("flip is an involution") {
    std::mt19937_64 rng(4);
    const CtVolume v = test::random_ct(rng, {3, 4, 2}, Affine::diagonal({0.5, 0.7, 2.0}, {1, 2, 3}));
    for (int axis = 0; axis < 3; ++axis) {
      const CtVolume back = flip(flip(v, axis), axis);
      CHECK(back.samples == v.samples);
      CHECK(back.affine.approx_equal(v.affine, 1e-12));
    }
  }

  TEST_CASE("resample constant volume") {
    CtVolume v;
    v.dims = {5, 6, 3};
    v.affine = Affine::diagonal({0.8, 0.8, 3.0});
    v.samples.assign(v.size(), 42.0f);
    const CtVolume r = resample(v, {1.0, 1.0, 1.0});
    CHECK(r.dims == Dims{4, 5, 9});
    for (float s : r.samples) CHECK(s == 42.0f);
    const Spacing got = voxel_spacing(r.affine);
    CHECK(got.sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(got.sz == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.affine.translation() == v.affine.translation());
  }

  TEST_CASE("ramp at 2 mm resampled to 1 mm") {
    CtVolume v;
    v.dims = {4, 1, 1};
    v.affine = Affine::diagonal({2, 1, 1});
    v.samples = {0, 1, 2, 3};
    const CtVolume r = resample(v, {1, 1, 1}, Interp::Trilinear);
    REQUIRE(r.dims == Dims{8, 1, 1});
    // Output voxel o sits at physical 1*o mm, i.e. input index o/2.
    for (std::size_t o = 0; o < 7; ++o) CHECK(r.samples[o] == doctest::Approx(o / 2.0).epsilon(1e-6));
    // o = 7 lies past the last input centre and takes the edge value.
    CHECK(r.samples[7] == 3.0f);
  }

  TEST_CASE("nearest resampling keeps masks binary") {
    std::mt19937_64 rng(5);
    const MaskVolume m = test::random_mask(rng, {7, 5, 3}, Affine::diagonal({0.7, 0.9, 2.5}));
    const MaskVolume r = resample(m, {1.0, 1.0, 1.0});
    for (auto s : r.samples) CHECK((s == 0 || s == 1));
    CHECK(code_of([&] { resample(m, {1.0, 1.0, 1.0}, Interp::Trilinear); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("nearest resampling approximately conserves phantom mask area") {
    PhantomSpec spec;
    spec.dims = {200, 160, 3};
    spec.spacing = {0.5, 0.5, 1.0};
    spec.outer_a_mm = 45;
    spec.outer_b_mm = 35;
    spec.ring_thickness_mm = 10;
    const Phantom p = generate_phantom(spec);
    const auto before = std::count(p.mask.samples.begin(), p.mask.samples.end(), 1) * 0.25;
    const MaskVolume r = resample(p.mask, {1.0, 1.0, 1.0});
    const auto after = static_cast<double>(std::count(r.samples.begin(), r.samples.end(), 1));
    CHECK(std::abs(after - before) / before <= 0.05);
  }
}
