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

// Workflows behind the command-line tool: preprocessing, measurement,
// manifest-driven evaluation, and their CSV/JSON reports.

#ifndef SARCO_PIPELINE_HPP
#define SARCO_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sarco/config.hpp"
#include "sarco/metrics.hpp"
#include "sarco/phantom.hpp"
#include "sarco/sma.hpp"
#include "sarco/types.hpp"

namespace sarco {

/// Reorient -> resample (trilinear) -> clip -> optional augmentation seeded
/// by config.seed -> optional normalization.
CtVolume preprocess_volume(const CtVolume& volume, const RunConfig& config);

/// Throws GeometryMismatch unless dims match and every affine element
/// agrees within 1e-4.
void require_same_geometry(const Dims& dims_a, const Affine& affine_a, const Dims& dims_b, const Affine& affine_b);

struct MeasureRow {
  std::string scan_id;
  double area_cm2 = 0.0;
  std::uint64_t pixel_count = 0;
  std::int64_t slice_index = 0;
  double pixel_area_mm2 = 0.0;
  std::optional<Sex> sex;
  std::optional<double> cutoff_cm2;
  std::optional<bool> sarcopenic;
};

MeasureRow measure_pair(const CtVolume& image, const MaskVolume& mask, std::optional<Sex> sex,
                        const RunConfig& config, const std::string& scan_id);

struct ReportRow {
  std::string scan_id;
  double gt_area_cm2 = 0.0;
  double pred_area_cm2 = 0.0;
  double dice = 0.0;
  double abs_pct_error = 0.0;
  double signed_pct_error = 0.0;
  std::optional<Sex> sex;
  std::optional<bool> gt_sarcopenic;
  std::optional<bool> pred_sarcopenic;
  std::int64_t slice_index = 0;
  double pixel_area_mm2 = 0.0;

  EvalRecord record() const;
};

struct ManifestEntry {
  std::string scan_id;
  std::filesystem::path gt_mask;
  std::filesystem::path pred_mask;
  std::optional<Sex> sex;
  std::optional<bool> gt_label;
};

/// CSV with header naming scan_id, gt_mask_path, pred_mask_path and
/// optionally sex, gt_label. Relative paths resolve against the manifest's
/// directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

/// Area, Dice and classification of one (ground truth, prediction) pair.
/// The slice policy picks the slice on the ground truth; the prediction is
/// measured on the same slice (or summed, under Sum).
ReportRow evaluate_pair(const MaskVolume& gt, const MaskVolume& pred, const ManifestEntry& entry,
                        const RunConfig& config);

struct RowFailure {
  std::string scan_id;
  std::string message;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;  // manifest order
  std::vector<RowFailure> failures;
  std::optional<EvalSummary> summary;
  std::optional<ClassificationMetrics> classification;
};

EvaluationReport evaluate_manifest(const std::vector<ManifestEntry>& entries, const RunConfig& config);

struct ScoreEntry {
  std::string scan_id;
  double score = 0.0;
  bool label = false;
};

/// CSV with header scan_id,score,label.
std::vector<ScoreEntry> read_scores(const std::filesystem::path& path);

/// Parses yes/no, true/false, 1/0, positive/negative.
bool parse_label(std::string_view text);

std::string render_measure(const MeasureRow& row, const RunConfig& config);
std::string render_evaluation(const EvaluationReport& report, const RunConfig& config);
/// Human-readable summary; percentages at 2 decimal places.
std::string render_evaluation_summary(const EvaluationReport& report);
std::string render_scores(const std::vector<ScoreEntry>& scores, double auc, const RunConfig& config);

std::string phantom_sidecar_json(const PhantomSpec& spec, const Phantom& phantom);

}  // namespace sarco

#endif  // SARCO_PIPELINE_HPP
