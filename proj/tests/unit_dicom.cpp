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
#include "sarco/dicom.hpp"
#include "sarco/io.hpp"
#include "support.hpp"

using namespace sarco;
using sarco::test::code_of;

namespace {

std::filesystem::path dicom_dir(const std::string& name) { return test::data_dir() / "dicom" / name; }

dicom::Slice parse(const std::filesystem::path& p) { return dicom::parse_slice(read_file(p), p.string()); }

void check_against(const CtVolume& v, const nlohmann::json& exp) {
  const auto dims = exp["dims"].get<std::vector<std::size_t>>();
  CHECK(v.dims == Dims{dims[0], dims[1], dims[2]});
  CHECK(v.affine.approx_equal(test::affine_from_json(exp["affine"]), 1e-9));
  const auto samples = exp["samples"].get<std::vector<double>>();
  REQUIRE(v.samples.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(v.samples[i] == doctest::Approx(samples[i]));
}

}  // namespace

TEST_SUITE("dicom_ingest") {
  TEST_CASE("2x2 slice fields match the pydicom dump") {
    const auto exp = test::load_json(dicom_dir("expected.json"))["slice_2x2"];
    const dicom::Slice s = parse(dicom_dir("slice_2x2") / "slice.dcm");
    CHECK(s.rows == exp["rows"].get<int>());
    CHECK(s.cols == exp["cols"].get<int>());
    CHECK(s.row_spacing == exp["pixel_spacing"][0].get<double>());
    CHECK(s.col_spacing == exp["pixel_spacing"][1].get<double>());
    for (int a = 0; a < 3; ++a) CHECK(s.image_position[a] == exp["image_position"][a].get<double>());
    for (int a = 0; a < 6; ++a) CHECK(s.image_orientation[a] == exp["image_orientation"][a].get<double>());
    CHECK(s.rescale_slope == exp["rescale_slope"].get<double>());
    CHECK(s.rescale_intercept == exp["rescale_intercept"].get<double>());
    CHECK_FALSE(s.rescale_defaulted);
    CHECK(s.stored_pixels == exp["stored_pixels"].get<std::vector<std::int32_t>>());
    CHECK(s.series_uid == exp["series_uid"].get<std::string>());
    CHECK(s.instance_number == exp["instance_number"].get<int>());
  }

  TEST_CASE("stored 1000 with intercept -1024 assembles to -24 HU") {
    dicom::Slice a = parse(dicom_dir("slice_2x2") / "slice.dcm");
    dicom::Slice b = a;
    b.image_position[2] += 5.0;
    const CtVolume v = dicom::assemble_series({a, b});
    for (float s : v.samples) CHECK(s == -24.0f);
  }

  TEST_CASE("explicit-VR series with a nested sequence matches the reference assembly") {
    const auto exp = test::load_json(dicom_dir("expected.json"))["series_explicit"];
    const dicom::SeriesResult r = dicom::load_series(dicom_dir("series_explicit"));
    CHECK(r.slice_count == 3);
    CHECK(r.slice_step_mm == doctest::Approx(exp["slice_step_mm"].get<double>()));
    CHECK(r.warnings.empty());
    check_against(r.volume, exp);
  }

  TEST_CASE("shuffled 3-slice series: dims (cols, rows, 3), step 5, translation at z=-100") {
    const dicom::SeriesResult r = dicom::load_series(dicom_dir("series_explicit"));
    const CtVolume& v = r.volume;
    CHECK(v.dims == Dims{5, 4, 3});
    CHECK(std::abs(v.affine(0, 0)) == doctest::Approx(0.8));
    CHECK(std::abs(v.affine(1, 1)) == doctest::Approx(0.8));
    CHECK(v.affine(2, 2) == doctest::Approx(5.0));
    CHECK(v.affine(0, 3) == doctest::Approx(0.0));
    CHECK(v.affine(1, 3) == doctest::Approx(0.0));
    CHECK(v.affine(2, 3) == doctest::Approx(-100.0));
  }

  TEST_CASE("implicit-VR series without rescale tags") {
    const auto exp = test::load_json(dicom_dir("expected.json"))["series_implicit"];
    const dicom::SeriesResult r = dicom::load_series(dicom_dir("series_implicit"));
    check_against(r.volume, exp);
    CHECK(r.warnings.size() == 2);
    for (const auto& w : r.warnings) CHECK(w.find("rescale") != std::string::npos);
    CHECK(parse(dicom_dir("series_implicit") / "slice0.dcm").rescale_defaulted);
  }

  TEST_CASE("voxel positions follow the slice geometry") {
    const dicom::SeriesResult r = dicom::load_series(dicom_dir("series_explicit"));
    std::vector<dicom::Slice> slices;
    for (const auto& e : std::filesystem::directory_iterator(dicom_dir("series_explicit")))
      slices.push_back(parse(e.path()));
    std::sort(slices.begin(), slices.end(),
              [](const auto& a, const auto& b) { return a.image_position[2] < b.image_position[2]; });
    for (std::size_t k = 0; k < slices.size(); ++k) {
      const dicom::Slice& s = slices[k];
      for (std::size_t j = 0; j < r.volume.dims[1]; ++j)
        for (std::size_t i = 0; i < r.volume.dims[0]; ++i) {
          const Vec3 got = r.volume.affine.apply(static_cast<double>(i), static_cast<double>(j), static_cast<double>(k));
          Vec3 lps{};
          for (int a = 0; a < 3; ++a)
            lps[a] = s.image_position[a] + i * s.row_cosine()[a] * s.col_spacing + j * s.col_cosine()[a] * s.row_spacing;
          CHECK(got[0] == doctest::Approx(-lps[0]).epsilon(1e-12));
          CHECK(got[1] == doctest::Approx(-lps[1]).epsilon(1e-12));
          CHECK(got[2] == doctest::Approx(lps[2]).epsilon(1e-12));
        }
    }
  }

  TEST_CASE("series errors") {
    CHECK(code_of([] { dicom::load_series(dicom_dir("mixed_uid")); }) == ErrorCode::MixedSeries);
    CHECK(code_of([] { dicom::load_series(dicom_dir("nonuniform")); }) == ErrorCode::NonUniformSliceSpacing);
    CHECK(code_of([] { dicom::load_series(dicom_dir("duplicate")); }) == ErrorCode::DuplicatePosition);
    CHECK(code_of([] { dicom::load_series(dicom_dir("single")); }) == ErrorCode::InsufficientSlices);
    const auto empty = test::scratch_dir("dicom_empty");
    CHECK(code_of([&] { dicom::load_series(empty); }) == ErrorCode::NoInput);
    CHECK(code_of([] { dicom::assemble_series({}); }) == ErrorCode::NoInput);
  }

  TEST_CASE("slice parse errors") {
    CHECK(code_of([] { parse(dicom_dir("bad") / "compressed.dcm"); }) == ErrorCode::CompressedTransferSyntax);
    CHECK(code_of([] { parse(dicom_dir("bad") / "no_preamble.dcm"); }) == ErrorCode::MissingPreamble);
    CHECK(code_of([] { parse(dicom_dir("bad") / "short_pixels.dcm"); }) == ErrorCode::PixelDataLengthMismatch);
    Bytes tiny(100, 0);
    CHECK(code_of([&] { dicom::parse_slice(tiny); }) == ErrorCode::MissingPreamble);
  }

  TEST_CASE("missing required tag is named") {
    Bytes b = read_file(dicom_dir("slice_2x2") / "slice.dcm");
    // Rename (0020,0032) to a private tag so the position is absent.
    for (std::size_t i = 132; i + 4 < b.size(); ++i)
      if (b[i] == 0x20 && b[i + 1] == 0x00 && b[i + 2] == 0x32 && b[i + 3] == 0x00 && b[i + 4] == 'D') {
        b[i + 2] = 0x33;
        break;
      }
    try {
      dicom::parse_slice(b);
      FAIL("expected MissingRequiredTag");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingRequiredTag);
      CHECK(std::string(e.what()).find("0020,0032") != std::string::npos);
    }
  }

  TEST_CASE("unreadable files fail the series with one line per offending file") {
    try {
      dicom::load_series(dicom_dir("with_junk"));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingPreamble);
      const std::string msg = e.what();
      CHECK(msg.find("readme.txt: MissingPreamble") != std::string::npos);
      CHECK(msg.find(".dcm:") == std::string::npos);
    }
  }

  TEST_CASE("rescale linearity: doubled stored values with half slope give equal HU") {
    std::vector<dicom::Slice> a;
    for (const auto& e : std::filesystem::directory_iterator(dicom_dir("series_explicit"))) a.push_back(parse(e.path()));
    std::vector<dicom::Slice> b = a;
    for (auto& s : b) {
      for (auto& p : s.stored_pixels) p *= 2;
      s.rescale_slope /= 2.0;
    }
    CHECK(dicom::assemble_series(a).samples == dicom::assemble_series(b).samples);
  }
}
