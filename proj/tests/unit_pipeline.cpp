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

#include "doctest.h"
#include "json.hpp"
#include "sarco/config.hpp"
#include "sarco/geometry.hpp"
#include "sarco/nifti.hpp"
#include "sarco/phantom.hpp"
#include "sarco/pipeline.hpp"
#include "support.hpp"

using namespace sarco;
using sarco::test::code_of;

TEST_SUITE("cli_app") {
  TEST_CASE("config keys round-trip through entries") {
    RunConfig c;
    c.load_text("# comment\norientation = LPS\nspacing=0.8,0.8,2\nhu-lo=-100\nformat=json\nseed=9\n\n");
    CHECK(c.target_orientation.str() == "LPS");
    CHECK(c.target_spacing.sz == 2.0);
    CHECK(c.hu_window.lo == -100.0);
    CHECK(c.output_format == OutputFormat::Json);
    RunConfig d;
    for (const auto& [k, v] : c.entries()) d.set(k, v);
    CHECK(d.entries() == c.entries());
  }

  TEST_CASE("config errors are ConfigError") {
    RunConfig c;
    CHECK(code_of([&] { c.set("colour", "blue"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { c.set("spacing", "1,2"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { c.set("spacing", "-1"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { c.set("orientation", "RRR"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { c.set("seed", "x"); }) == ErrorCode::ConfigError);
    CHECK(code_of([&] { c.load_text("nonsense line"); }) == ErrorCode::ConfigError);
    RunConfig bad;
    bad.hu_window = {300, 200};
    CHECK(code_of([&] { bad.validate(); }) == ErrorCode::ConfigError);
  }

  TEST_CASE("format_number is shortest round-trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(144.0) == "144");
    CHECK(format_number(28.32) == "28.32");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("preprocess reaches the target spacing and unit range") {
    PhantomSpec spec;
    spec.dims = {80, 64, 6};
    spec.spacing = {0.5, 0.5, 2.0};
    spec.outer_a_mm = 15;
    spec.outer_b_mm = 12;
    spec.ring_thickness_mm = 4;
    spec.annotated_slice = 3;
    const Phantom p = generate_phantom(spec);
    RunConfig c;
    c.set("spacing", "1");
    const CtVolume out = preprocess_volume(p.ct, c);
    const Spacing s = voxel_spacing(out.affine);
    CHECK(s.sx == doctest::Approx(1.0));
    CHECK(s.sz == doctest::Approx(1.0));
    for (float v : out.samples) CHECK((v >= 0.0f && v <= 1.0f));
  }

  TEST_CASE("augmenting preprocess is seeded") {
    const Phantom p = generate_phantom(PhantomSpec{});
    RunConfig c;
    c.set("augment", "true");
    c.set("crop", "96x96");
    c.set("seed", "17");
    const CtVolume a = preprocess_volume(p.ct, c);
    const CtVolume b = preprocess_volume(p.ct, c);
    CHECK(a.dims == Dims{96, 96, 3});
    CHECK(a.samples == b.samples);
  }

  TEST_CASE("measure_pair on the phantom") {
    const Phantom p = generate_phantom(PhantomSpec{});
    RunConfig c;
    const MeasureRow none = measure_pair(p.ct, p.mask, std::nullopt, c, "ph");
    CHECK(std::abs(none.area_cm2 - p.analytic_area_cm2) / p.analytic_area_cm2 < 0.02);
    CHECK_FALSE(none.sarcopenic.has_value());
    const MeasureRow male = measure_pair(p.ct, p.mask, Sex::Male, c, "ph");
    CHECK(*male.sarcopenic);
    CHECK(*male.cutoff_cm2 == 144.0);
  }

  TEST_CASE("measure_pair reorients both inputs before comparing geometry") {
    const Phantom p = generate_phantom(PhantomSpec{});
    const MaskVolume flipped = reorient(p.mask, OrientationCode::parse("LPS"));
    RunConfig c;
    const MeasureRow row = measure_pair(p.ct, flipped, std::nullopt, c, "ph");
    CHECK(row.pixel_count == measure_pair(p.ct, p.mask, std::nullopt, c, "ph").pixel_count);
  }

  TEST_CASE("mismatched geometry") {
    const Phantom p = generate_phantom(PhantomSpec{});
    PhantomSpec other;
    other.dims = {150, 128, 3};
    const Phantom q = generate_phantom(other);
    CHECK(code_of([&] { measure_pair(p.ct, q.mask, std::nullopt, RunConfig{}, "x"); }) == ErrorCode::GeometryMismatch);
    MaskVolume shifted = p.mask;
    Vec3 t = shifted.affine.translation();
    t[0] += 0.01;
    shifted.affine.set_translation(t);
    CHECK(code_of([&] { measure_pair(p.ct, shifted, std::nullopt, RunConfig{}, "x"); }) ==
          ErrorCode::GeometryMismatch);
  }

  TEST_CASE("evaluate_pair with identical masks") {
    const Phantom p = generate_phantom(PhantomSpec{});
    ManifestEntry e{"ph", {}, {}, Sex::Female, std::nullopt};
    const ReportRow r = evaluate_pair(p.mask, p.mask, e, RunConfig{});
    CHECK(r.dice == 1.0);
    CHECK(r.abs_pct_error == 0.0);
    CHECK(*r.gt_sarcopenic == *r.pred_sarcopenic);
    CHECK(*r.gt_sarcopenic);
  }

  TEST_CASE("manifest gt_label overrides the area-based ground truth call") {
    const Phantom p = generate_phantom(PhantomSpec{});
    ManifestEntry e{"ph", {}, {}, Sex::Female, false};
    const ReportRow r = evaluate_pair(p.mask, p.mask, e, RunConfig{});
    CHECK_FALSE(*r.gt_sarcopenic);
    CHECK(*r.pred_sarcopenic);
  }

  TEST_CASE("manifest parsing and row failures") {
    const auto dir = test::scratch_dir("pipeline_manifest");
    const Phantom p = generate_phantom(PhantomSpec{});
    nifti::save(dir / "gt.nii.gz", p.mask);
    nifti::save(dir / "pred.nii.gz", p.mask);
    write_text_file(dir / "m.csv",
                    "scan_id,gt_mask_path,pred_mask_path,sex,gt_label\n"
                    "a,gt.nii.gz,pred.nii.gz,male,yes\n"
                    "\"b,quoted\",gt.nii.gz,missing.nii.gz,,\n");
    const auto entries = read_manifest(dir / "m.csv");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].gt_mask == dir / "gt.nii.gz");
    CHECK(*entries[0].gt_label);
    CHECK(entries[1].scan_id == "b,quoted");
    CHECK_FALSE(entries[1].sex.has_value());
    const EvaluationReport r = evaluate_manifest(entries, RunConfig{});
    CHECK(r.rows.size() == 1);
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].scan_id == "b,quoted");
    CHECK(r.failures[0].message.rfind("IoError", 0) == 0);
    const std::string csv = render_evaluation(r, RunConfig{});
    CHECK(csv.find("# config.std-divisor=N") != std::string::npos);
    CHECK(csv.find("# failed.b,quoted=IoError") != std::string::npos);
  }

  TEST_CASE("json reports carry config and the same column names") {
    const Phantom p = generate_phantom(PhantomSpec{});
    RunConfig c;
    c.set("format", "json");
    EvaluationReport r;
    r.rows.push_back(evaluate_pair(p.mask, p.mask, {"ph", {}, {}, std::nullopt, std::nullopt}, c));
    const auto j = nlohmann::json::parse(render_evaluation(r, c));
    CHECK(j["config"]["hu-lo"] == "-175");
    const std::vector<std::string> want{"scan_id", "gt_area_cm2", "pred_area_cm2", "dice", "abs_pct_error",
                                        "signed_pct_error", "sex", "gt_sarcopenic", "pred_sarcopenic",
                                        "slice_index", "pixel_area_mm2"};
    std::vector<std::string> got;
    const auto ordered = nlohmann::ordered_json::parse(render_evaluation(r, c));
    for (const auto& [k, v] : ordered["rows"][0].items()) got.push_back(k);
    CHECK(got == want);
    CHECK(j["rows"][0]["sex"].is_null());
  }

  TEST_CASE("scores file") {
    const auto dir = test::scratch_dir("pipeline_scores");
    write_text_file(dir / "s.csv", "scan_id,score,label\na,0.9,yes\nb,0.8,no\nc,0.4,1\nd,0.3,false\n");
    const auto s = read_scores(dir / "s.csv");
    REQUIRE(s.size() == 4);
    CHECK(s[2].label);
    write_text_file(dir / "bad.csv", "scan_id,score,label\na,high,yes\n");
    CHECK(code_of([&] { read_scores(dir / "bad.csv"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("labels") {
    CHECK(parse_label("Yes"));
    CHECK_FALSE(parse_label("negative"));
    CHECK(code_of([] { parse_label("maybe"); }) == ErrorCode::InvalidArgument);
  }
}
