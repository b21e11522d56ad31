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

#include "sarco/sarco.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sarco/config.hpp"
#include "sarco/dicom.hpp"
#include "sarco/error.hpp"
#include "sarco/geometry.hpp"
#include "sarco/metrics.hpp"
#include "sarco/nifti.hpp"
#include "sarco/phantom.hpp"
#include "sarco/pipeline.hpp"
#include "sarco/segment.hpp"
#include "sarco/sma.hpp"

using sarco::ErrorCode;

struct sarco_volume {
  std::variant<sarco::CtVolume, sarco::MaskVolume> v;
};

struct sarco_config {
  sarco::RunConfig c;
};

namespace {

thread_local std::string g_last_error;

constexpr std::pair<ErrorCode, sarco_status> kCodeMap[] = {
    {ErrorCode::Ok, SARCO_OK},
    {ErrorCode::InvalidArgument, SARCO_INVALID_ARGUMENT},
    {ErrorCode::IoError, SARCO_IO_ERROR},
    {ErrorCode::BadMagic, SARCO_BAD_MAGIC},
    {ErrorCode::BadHeader, SARCO_BAD_HEADER},
    {ErrorCode::UnsupportedDatatype, SARCO_UNSUPPORTED_DATATYPE},
    {ErrorCode::TruncatedPayload, SARCO_TRUNCATED_PAYLOAD},
    {ErrorCode::NonFiniteAfterScaling, SARCO_NON_FINITE_AFTER_SCALING},
    {ErrorCode::DegenerateAffine, SARCO_DEGENERATE_AFFINE},
    {ErrorCode::DimsOverflow, SARCO_DIMS_OVERFLOW},
    {ErrorCode::MissingPreamble, SARCO_MISSING_PREAMBLE},
    {ErrorCode::CompressedTransferSyntax, SARCO_COMPRESSED_TRANSFER_SYNTAX},
    {ErrorCode::MissingRequiredTag, SARCO_MISSING_REQUIRED_TAG},
    {ErrorCode::PixelDataLengthMismatch, SARCO_PIXEL_DATA_LENGTH_MISMATCH},
    {ErrorCode::MixedSeries, SARCO_MIXED_SERIES},
    {ErrorCode::NonUniformSliceSpacing, SARCO_NON_UNIFORM_SLICE_SPACING},
    {ErrorCode::DuplicatePosition, SARCO_DUPLICATE_POSITION},
    {ErrorCode::InsufficientSlices, SARCO_INSUFFICIENT_SLICES},
    {ErrorCode::NoInput, SARCO_NO_INPUT},
    {ErrorCode::AmbiguousOrientation, SARCO_AMBIGUOUS_ORIENTATION},
    {ErrorCode::TargetExceedsDims, SARCO_TARGET_EXCEEDS_DIMS},
    {ErrorCode::TargetBelowDims, SARCO_TARGET_BELOW_DIMS},
    {ErrorCode::EmptyMask, SARCO_EMPTY_MASK},
    {ErrorCode::MultipleAnnotatedSlices, SARCO_MULTIPLE_ANNOTATED_SLICES},
    {ErrorCode::GeometryMismatch, SARCO_GEOMETRY_MISMATCH},
    {ErrorCode::EmptySlice, SARCO_EMPTY_SLICE},
    {ErrorCode::DimsMismatch, SARCO_DIMS_MISMATCH},
    {ErrorCode::NonPositiveGroundTruth, SARCO_NON_POSITIVE_GROUND_TRUTH},
    {ErrorCode::EmptyInput, SARCO_EMPTY_INPUT},
    {ErrorCode::SingleClassInput, SARCO_SINGLE_CLASS_INPUT},
    {ErrorCode::ConfigError, SARCO_CONFIG_ERROR},
};

constexpr bool codes_agree() {
  for (const auto& [code, status] : kCodeMap)
    if (static_cast<int>(code) != static_cast<int>(status)) return false;
  return true;
}
static_assert(codes_agree(), "sarco_status must mirror sarco::ErrorCode");

sarco_status fail(sarco_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
sarco_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SARCO_OK;
  } catch (const sarco::Error& e) {
    return fail(static_cast<sarco_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SARCO_INTERNAL_ERROR, "InternalError: out of memory");
  } catch (const std::exception& e) {
    return fail(SARCO_INTERNAL_ERROR, std::string("InternalError: ") + e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw sarco::Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_string(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

const sarco::CtVolume& as_ct(const sarco_volume* v) {
  require(v != nullptr, "volume is null");
  const auto* ct = std::get_if<sarco::CtVolume>(&v->v);
  require(ct != nullptr, "expected a CT volume");
  return *ct;
}

const sarco::MaskVolume& as_mask(const sarco_volume* v) {
  require(v != nullptr, "volume is null");
  const auto* m = std::get_if<sarco::MaskVolume>(&v->v);
  require(m != nullptr, "expected a mask volume");
  return *m;
}

const sarco::RunConfig& config_or_default(const sarco_config* c) {
  static const sarco::RunConfig defaults;
  return c ? c->c : defaults;
}

template <class T>
sarco_volume* wrap(T&& volume) {
  return new sarco_volume{std::forward<T>(volume)};
}

}  // namespace

extern "C" {

const char* sarco_last_error(void) { return g_last_error.c_str(); }

const char* sarco_status_name(sarco_status status) {
  if (status == SARCO_INTERNAL_ERROR) return "InternalError";
  for (const auto& [code, s] : kCodeMap)
    if (s == status) return sarco::error_name(code).data();
  return "Unknown";
}

void sarco_free_string(char* s) { std::free(s); }

sarco_status sarco_config_create(sarco_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new sarco_config{};
  });
}

void sarco_config_destroy(sarco_config* config) { delete config; }

sarco_status sarco_config_set(sarco_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "config, key and value are required");
    config->c.set(key, value);
  });
}

sarco_status sarco_config_load_file(sarco_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "config and path are required");
    config->c.load_file(path);
  });
}

sarco_status sarco_config_validate(const sarco_config* config) {
  return guarded([&] {
    require(config != nullptr, "config is null");
    config->c.validate();
  });
}

sarco_status sarco_config_describe(const sarco_config* config, char** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    std::string text;
    for (const auto& [k, v] : config_or_default(config).entries()) text += k + "=" + v + "\n";
    put_string(out, text);
  });
}

sarco_status sarco_volume_load(const char* path, sarco_volume_kind kind, sarco_volume** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    if (kind == SARCO_VOLUME_MASK)
      *out = wrap(sarco::nifti::load_mask(path));
    else
      *out = wrap(sarco::nifti::load_ct(path));
  });
}

sarco_status sarco_volume_save(const sarco_volume* volume, const char* path) {
  return guarded([&] {
    require(volume && path, "volume and path are required");
    std::visit([&](const auto& v) { sarco::nifti::save(path, v); }, volume->v);
  });
}

void sarco_volume_destroy(sarco_volume* volume) { delete volume; }

sarco_status sarco_volume_get_info(const sarco_volume* volume, sarco_volume_info* info) {
  return guarded([&] {
    require(volume && info, "volume and info are required");
    std::visit(
        [&](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          *info = sarco_volume_info{};
          info->kind = std::is_same_v<V, sarco::CtVolume> ? SARCO_VOLUME_CT : SARCO_VOLUME_MASK;
          const sarco::Spacing sp = sarco::voxel_spacing(v.affine);
          for (int a = 0; a < 3; ++a) {
            info->dims[a] = v.dims[a];
            info->spacing[a] = sp[a];
          }
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) info->affine[r * 4 + c] = v.affine(r, c);
          std::string code = "???";
          try {
            code = sarco::orientation_of(v.affine).str();
          } catch (const sarco::Error&) {
          }
          std::memcpy(info->orientation, code.c_str(), 4);
          if (!v.samples.empty()) {
            const auto [lo, hi] = std::minmax_element(v.samples.begin(), v.samples.end());
            info->min_value = static_cast<double>(*lo);
            info->max_value = static_cast<double>(*hi);
          }
          if constexpr (std::is_same_v<V, sarco::CtVolume>) info->outside_hu_range = sarco::count_outside_hu_range(v);
        },
        volume->v);
  });
}

sarco_status sarco_volume_create(sarco_volume_kind kind, const size_t dims[3], const double affine[16],
                                 const void* samples, sarco_volume** out) {
  return guarded([&] {
    require(dims && affine && samples && out, "dims, affine, samples and out are required");
    sarco::Affine::Matrix m{};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m[r][c] = affine[r * 4 + c];
    auto fill = [&](auto& v) {
      v.dims = {dims[0], dims[1], dims[2]};
      v.affine = sarco::Affine(m);
      using S = typename std::decay_t<decltype(v.samples)>::value_type;
      const auto* p = static_cast<const S*>(samples);
      v.samples.assign(p, p + v.size());
      sarco::validate(v);
    };
    if (kind == SARCO_VOLUME_MASK) {
      sarco::MaskVolume v;
      fill(v);
      *out = wrap(std::move(v));
    } else {
      sarco::CtVolume v;
      fill(v);
      *out = wrap(std::move(v));
    }
  });
}

sarco_status sarco_volume_copy_data(const sarco_volume* volume, void* buffer, size_t buffer_bytes) {
  return guarded([&] {
    require(volume && buffer, "volume and buffer are required");
    std::visit(
        [&](const auto& v) {
          const std::size_t bytes = v.samples.size() * sizeof(v.samples[0]);
          require(buffer_bytes >= bytes, "buffer too small");
          std::memcpy(buffer, v.samples.data(), bytes);
        },
        volume->v);
  });
}

sarco_status sarco_dicom_convert(const char* dir, sarco_volume** out, size_t* slice_count, double* slice_step_mm,
                                 char** warnings) {
  return guarded([&] {
    require(dir && out, "dir and out are required");
    sarco::dicom::SeriesResult r = sarco::dicom::load_series(dir);
    std::string text;
    for (const std::string& w : r.warnings) text += w + "\n";
    put_string(warnings, text);
    if (slice_count) *slice_count = r.slice_count;
    if (slice_step_mm) *slice_step_mm = r.slice_step_mm;
    *out = wrap(std::move(r.volume));
  });
}

sarco_status sarco_preprocess(const sarco_volume* ct, const sarco_config* config, sarco_volume** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = wrap(sarco::preprocess_volume(as_ct(ct), config_or_default(config)));
  });
}

sarco_status sarco_segment(const sarco_volume* ct, int64_t slice_index, const sarco_config* config,
                           sarco_volume** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const sarco::CtVolume& v = as_ct(ct);
    const sarco::RunConfig& cfg = config_or_default(config);
    cfg.validate();
    const int axis = sarco::axial_axis(v.affine);
    std::size_t k = v.dims[axis] / 2;
    if (slice_index >= 0) {
      k = static_cast<std::size_t>(slice_index);
      if (k >= v.dims[axis])
        throw sarco::Error(ErrorCode::InvalidArgument, "slice " + std::to_string(k) + " outside the axial extent " +
                                                            std::to_string(v.dims[axis]));
    }
    *out = wrap(sarco::segment_volume(v, k, cfg.seg_params));
  });
}

sarco_status sarco_measure(const sarco_volume* image, const sarco_volume* mask, const char* sex, const char* scan_id,
                           const sarco_config* config, char** report) {
  return guarded([&] {
    require(report != nullptr, "report is null");
    std::optional<sarco::Sex> s;
    if (sex && *sex) s = sarco::parse_sex(sex);
    const sarco::RunConfig& cfg = config_or_default(config);
    const sarco::MeasureRow row = sarco::measure_pair(as_ct(image), as_mask(mask), s, cfg, scan_id ? scan_id : "");
    put_string(report, sarco::render_measure(row, cfg));
  });
}

sarco_status sarco_evaluate(const char* manifest_path, const sarco_config* config, char** report, char** summary,
                            size_t* failed_rows) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest path is null");
    const sarco::RunConfig& cfg = config_or_default(config);
    cfg.validate();
    const auto entries = sarco::read_manifest(manifest_path);
    const sarco::EvaluationReport r = sarco::evaluate_manifest(entries, cfg);
    put_string(report, sarco::render_evaluation(r, cfg));
    put_string(summary, sarco::render_evaluation_summary(r));
    if (failed_rows) *failed_rows = r.failures.size();
  });
}

sarco_status sarco_evaluate_scores(const char* scores_path, const sarco_config* config, char** report, double* auc) {
  return guarded([&] {
    require(scores_path != nullptr, "scores path is null");
    const sarco::RunConfig& cfg = config_or_default(config);
    const auto scores = sarco::read_scores(scores_path);
    std::vector<double> s;
    std::unique_ptr<bool[]> labels(new bool[scores.size()]);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      s.push_back(scores[i].score);
      labels[i] = scores[i].label;
    }
    const double value = sarco::roc_auc(s, std::span<const bool>(labels.get(), scores.size()));
    if (auc) *auc = value;
    put_string(report, sarco::render_scores(scores, value, cfg));
  });
}

void sarco_phantom_spec_default(sarco_phantom_spec* spec) {
  if (!spec) return;
  const sarco::PhantomSpec d;
  for (int a = 0; a < 3; ++a) {
    spec->dims[a] = d.dims[a];
    spec->spacing[a] = d.spacing[a];
  }
  spec->outer_a_mm = d.outer_a_mm;
  spec->outer_b_mm = d.outer_b_mm;
  spec->ring_thickness_mm = d.ring_thickness_mm;
  spec->muscle_hu = d.muscle_hu;
  spec->interior_hu = d.interior_hu;
  spec->background_hu = d.background_hu;
  spec->annotated_slice = d.annotated_slice;
  spec->noise_sd = d.noise_sd;
  spec->seed = d.seed;
}

sarco_status sarco_phantom_generate(const sarco_phantom_spec* spec, sarco_volume** ct, sarco_volume** mask,
                                    double* analytic_area_cm2, char** sidecar_json) {
  return guarded([&] {
    require(spec != nullptr, "spec is null");
    sarco::PhantomSpec s;
    s.dims = {spec->dims[0], spec->dims[1], spec->dims[2]};
    s.spacing = {spec->spacing[0], spec->spacing[1], spec->spacing[2]};
    s.outer_a_mm = spec->outer_a_mm;
    s.outer_b_mm = spec->outer_b_mm;
    s.ring_thickness_mm = spec->ring_thickness_mm;
    s.muscle_hu = spec->muscle_hu;
    s.interior_hu = spec->interior_hu;
    s.background_hu = spec->background_hu;
    s.annotated_slice = spec->annotated_slice;
    s.noise_sd = spec->noise_sd;
    s.seed = spec->seed;
    sarco::Phantom p = sarco::generate_phantom(s);
    put_string(sidecar_json, sarco::phantom_sidecar_json(s, p));
    if (analytic_area_cm2) *analytic_area_cm2 = p.analytic_area_cm2;
    if (ct) *ct = wrap(std::move(p.ct));
    if (mask) *mask = wrap(std::move(p.mask));
  });
}

sarco_status sarco_dice(const uint8_t* a, const uint8_t* b, size_t n, double* out) {
  return guarded([&] {
    require(out && (n == 0 || (a && b)), "a, b and out are required");
    *out = sarco::dice(std::span<const std::uint8_t>(a, n), std::span<const std::uint8_t>(b, n));
  });
}

sarco_status sarco_area_errors(double gt_cm2, double pred_cm2, double* signed_pct, double* abs_pct) {
  return guarded([&] {
    const sarco::AreaErrors e = sarco::area_errors(gt_cm2, pred_cm2);
    if (signed_pct) *signed_pct = e.signed_pct;
    if (abs_pct) *abs_pct = e.abs_pct;
  });
}

sarco_status sarco_confusion_metrics(size_t tp, size_t fp, size_t fn, size_t tn, sarco_classification* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const sarco::ClassificationMetrics m = sarco::confusion_metrics(tp, fp, fn, tn);
    *out = sarco_classification{};
    out->tp = m.tp;
    out->fp = m.fp;
    out->fn = m.fn;
    out->tn = m.tn;
    out->accuracy = m.accuracy;
    out->has_precision = m.precision.has_value();
    out->has_recall = m.recall.has_value();
    out->has_f1 = m.f1.has_value();
    out->precision = m.precision.value_or(0.0);
    out->recall = m.recall.value_or(0.0);
    out->f1 = m.f1.value_or(0.0);
  });
}

sarco_status sarco_roc_auc(const double* scores, const int* labels, size_t n, double* out) {
  return guarded([&] {
    require(out && (n == 0 || (scores && labels)), "scores, labels and out are required");
    std::unique_ptr<bool[]> lb(new bool[n]);
    for (size_t i = 0; i < n; ++i) lb[i] = labels[i] != 0;
    *out = sarco::roc_auc(std::span<const double>(scores, n), std::span<const bool>(lb.get(), n));
  });
}

}  // extern "C"
