/* Copyright 2026 The sarcoscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libsarco. Every call returns a sarco_status; on failure
 * sarco_last_error() holds a message for the calling thread. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with sarco_free_string. */

#ifndef SARCO_SARCO_H
#define SARCO_SARCO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SARCO_API __declspec(dllexport)
#else
#define SARCO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sarco_status {
  SARCO_OK = 0,
  SARCO_INVALID_ARGUMENT = 1,
  SARCO_IO_ERROR = 2,
  SARCO_BAD_MAGIC = 10,
  SARCO_BAD_HEADER = 11,
  SARCO_UNSUPPORTED_DATATYPE = 12,
  SARCO_TRUNCATED_PAYLOAD = 13,
  SARCO_NON_FINITE_AFTER_SCALING = 14,
  SARCO_DEGENERATE_AFFINE = 15,
  SARCO_DIMS_OVERFLOW = 16,
  SARCO_MISSING_PREAMBLE = 20,
  SARCO_COMPRESSED_TRANSFER_SYNTAX = 21,
  SARCO_MISSING_REQUIRED_TAG = 22,
  SARCO_PIXEL_DATA_LENGTH_MISMATCH = 23,
  SARCO_MIXED_SERIES = 24,
  SARCO_NON_UNIFORM_SLICE_SPACING = 25,
  SARCO_DUPLICATE_POSITION = 26,
  SARCO_INSUFFICIENT_SLICES = 27,
  SARCO_NO_INPUT = 28,
  SARCO_AMBIGUOUS_ORIENTATION = 30,
  SARCO_TARGET_EXCEEDS_DIMS = 31,
  SARCO_TARGET_BELOW_DIMS = 32,
  SARCO_EMPTY_MASK = 40,
  SARCO_MULTIPLE_ANNOTATED_SLICES = 41,
  SARCO_GEOMETRY_MISMATCH = 42,
  SARCO_EMPTY_SLICE = 43,
  SARCO_DIMS_MISMATCH = 50,
  SARCO_NON_POSITIVE_GROUND_TRUTH = 51,
  SARCO_EMPTY_INPUT = 52,
  SARCO_SINGLE_CLASS_INPUT = 53,
  SARCO_CONFIG_ERROR = 60,
  SARCO_INTERNAL_ERROR = 99
} sarco_status;

typedef enum sarco_volume_kind { SARCO_VOLUME_CT = 0, SARCO_VOLUME_MASK = 1 } sarco_volume_kind;

typedef struct sarco_volume sarco_volume;
typedef struct sarco_config sarco_config;

SARCO_API const char* sarco_last_error(void);
SARCO_API const char* sarco_status_name(sarco_status status);
SARCO_API void sarco_free_string(char* s);

/* ---- configuration ---- */

SARCO_API sarco_status sarco_config_create(sarco_config** out);
SARCO_API void sarco_config_destroy(sarco_config* config);
/* Keys are the CLI flag names without dashes, e.g. "hu-lo", "spacing". */
SARCO_API sarco_status sarco_config_set(sarco_config* config, const char* key, const char* value);
SARCO_API sarco_status sarco_config_load_file(sarco_config* config, const char* path);
/* Checks cross-key constraints such as hu-lo < hu-hi. */
SARCO_API sarco_status sarco_config_validate(const sarco_config* config);
/* One "key=value" line per setting, in a fixed order. */
SARCO_API sarco_status sarco_config_describe(const sarco_config* config, char** out);

/* ---- volumes ---- */

typedef struct sarco_volume_info {
  sarco_volume_kind kind;
  size_t dims[3];
  double spacing[3];
  char orientation[4]; /* e.g. "RAS"; "???" when ambiguous */
  double affine[16];   /* row-major 4x4 */
  double min_value;
  double max_value;
  size_t outside_hu_range; /* CT samples outside [-1024, 3071] */
} sarco_volume_info;

/* Reads .nii or .nii.gz. Masks are binarized at 0.5. */
SARCO_API sarco_status sarco_volume_load(const char* path, sarco_volume_kind kind, sarco_volume** out);
/* Writes gzip-compressed output when the path ends in ".gz". */
SARCO_API sarco_status sarco_volume_save(const sarco_volume* volume, const char* path);
SARCO_API void sarco_volume_destroy(sarco_volume* volume);
SARCO_API sarco_status sarco_volume_get_info(const sarco_volume* volume, sarco_volume_info* info);
/* Builds a volume from samples (float for CT, uint8_t for masks) laid out
 * with axis 0 fastest. */
SARCO_API sarco_status sarco_volume_create(sarco_volume_kind kind, const size_t dims[3], const double affine[16],
                                           const void* samples, sarco_volume** out);
/* Copies the samples into buffer; buffer_bytes must be at least
 * n * sizeof(float) for CT or n for masks. */
SARCO_API sarco_status sarco_volume_copy_data(const sarco_volume* volume, void* buffer, size_t buffer_bytes);

/* ---- workflows ---- */

/* Assembles one DICOM series. Any unreadable file fails the call, one line per
 * file in sarco_last_error(). warnings lists defaulted rescale tags. */
SARCO_API sarco_status sarco_dicom_convert(const char* dir, sarco_volume** out, size_t* slice_count,
                                           double* slice_step_mm, char** warnings);
SARCO_API sarco_status sarco_preprocess(const sarco_volume* ct, const sarco_config* config, sarco_volume** out);
/* slice_index < 0 picks the middle axial slice. */
SARCO_API sarco_status sarco_segment(const sarco_volume* ct, int64_t slice_index, const sarco_config* config,
                                     sarco_volume** out);
/* sex may be NULL, "male" or "female". */
SARCO_API sarco_status sarco_measure(const sarco_volume* image, const sarco_volume* mask, const char* sex,
                                     const char* scan_id, const sarco_config* config, char** report);
/* Per-row failures do not fail the call; their count lands in failed_rows. */
SARCO_API sarco_status sarco_evaluate(const char* manifest_path, const sarco_config* config, char** report,
                                      char** summary, size_t* failed_rows);
SARCO_API sarco_status sarco_evaluate_scores(const char* scores_path, const sarco_config* config, char** report,
                                             double* auc);

typedef struct sarco_phantom_spec {
  size_t dims[3];
  double spacing[3];
  double outer_a_mm;
  double outer_b_mm;
  double ring_thickness_mm;
  double muscle_hu;
  double interior_hu;
  double background_hu;
  size_t annotated_slice;
  double noise_sd;
  uint64_t seed;
} sarco_phantom_spec;

SARCO_API void sarco_phantom_spec_default(sarco_phantom_spec* spec);
SARCO_API sarco_status sarco_phantom_generate(const sarco_phantom_spec* spec, sarco_volume** ct, sarco_volume** mask,
                                              double* analytic_area_cm2, char** sidecar_json);

/* ---- metrics ---- */

typedef struct sarco_classification {
  size_t tp, fp, fn, tn;
  double accuracy;
  double precision, recall, f1; /* valid only when the has_ flag is set */
  int has_precision, has_recall, has_f1;
} sarco_classification;

SARCO_API sarco_status sarco_dice(const uint8_t* a, const uint8_t* b, size_t n, double* out);
SARCO_API sarco_status sarco_area_errors(double gt_cm2, double pred_cm2, double* signed_pct, double* abs_pct);
SARCO_API sarco_status sarco_confusion_metrics(size_t tp, size_t fp, size_t fn, size_t tn, sarco_classification* out);
SARCO_API sarco_status sarco_roc_auc(const double* scores, const int* labels, size_t n, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SARCO_SARCO_H */
