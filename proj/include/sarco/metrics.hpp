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

#ifndef SARCO_METRICS_HPP
#define SARCO_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sarco/types.hpp"

namespace sarco {

/// 2|a and b| / (|a| + |b|); 1.0 when both are empty. Nonzero means labelled.
double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double dice(const MaskSlice& a, const MaskSlice& b);
double dice(const MaskVolume& a, const MaskVolume& b);

struct AreaErrors {
  double signed_pct = 0.0;  // (pred - gt) / gt * 100
  double abs_pct = 0.0;
};

AreaErrors area_errors(double gt_cm2, double pred_cm2);

struct EvalRecord {
  std::string scan_id;
  double dice = 0.0;
  double gt_area_cm2 = 0.0;
  double pred_area_cm2 = 0.0;
  double abs_pct_error = 0.0;
  double signed_pct_error = 0.0;
  std::optional<bool> gt_sarcopenic;
  std::optional<bool> pred_sarcopenic;
};

/// Positive class = sarcopenic. Ratios with a zero denominator are nullopt.
struct ClassificationMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct Prediction {
  bool predicted = false;
  bool actual = false;
};

ClassificationMetrics confusion_metrics(std::span<const Prediction> pairs);
ClassificationMetrics confusion_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

/// Probability that a random positive outscores a random negative, ties
/// counting one half.
double roc_auc(std::span<const double> scores, std::span<const bool> labels);

/// Population statistics (divisor N).
struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
};

SummaryStats summary_stats(std::span<const double> values);

struct EvalSummary {
  SummaryStats dice;
  SummaryStats signed_pct_error;
  SummaryStats abs_pct_error;
};

EvalSummary summarize(std::span<const EvalRecord> records);

}  // namespace sarco

#endif  // SARCO_METRICS_HPP
