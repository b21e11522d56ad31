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

#include "sarco/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sarco/error.hpp"

namespace sarco {

double dice(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimsMismatch, "masks differ in size");
  std::uint64_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a[i] != 0;
    const bool y = b[i] != 0;
    na += x;
    nb += y;
    both += x && y;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double dice(const MaskSlice& a, const MaskSlice& b) {
  if (a.nx != b.nx || a.ny != b.ny) throw Error(ErrorCode::DimsMismatch, "slice extents differ");
  return dice(std::span<const std::uint8_t>(a.data), std::span<const std::uint8_t>(b.data));
}

double dice(const MaskVolume& a, const MaskVolume& b) {
  if (a.dims != b.dims) throw Error(ErrorCode::DimsMismatch, "volume dims differ");
  return dice(std::span<const std::uint8_t>(a.samples), std::span<const std::uint8_t>(b.samples));
}

AreaErrors area_errors(double gt_cm2, double pred_cm2) {
  if (!(gt_cm2 > 0.0)) throw Error(ErrorCode::NonPositiveGroundTruth, "ground-truth area must be > 0");
  AreaErrors e;
  e.signed_pct = (pred_cm2 - gt_cm2) / gt_cm2 * 100.0;
  e.abs_pct = std::abs(e.signed_pct);
  return e;
}

ClassificationMetrics confusion_metrics(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  const std::size_t total = tp + fp + fn + tn;
  if (total == 0) throw Error(ErrorCode::EmptyInput, "no predictions");
  ClassificationMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  m.tn = tn;
  m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
  if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  return m;
}

ClassificationMetrics confusion_metrics(std::span<const Prediction> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyInput, "no predictions");
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const Prediction& p : pairs) {
    if (p.predicted && p.actual) ++tp;
    else if (p.predicted) ++fp;
    else if (p.actual) ++fn;
    else ++tn;
  }
  return confusion_metrics(tp, fp, fn, tn);
}

double roc_auc(std::span<const double> scores, std::span<const bool> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::DimsMismatch, "scores and labels differ in length");
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "no scores");
  for (double s : scores)
    if (std::isnan(s)) throw Error(ErrorCode::InvalidArgument, "NaN score");

  // Mann-Whitney U: sum of positive ranks, tied groups share their mean rank.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    const double mean_rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t r = start; r < end; ++r)
      if (labels[order[r]]) {
        positive_rank_sum += mean_rank;
        ++n_pos;
      }
    start = end;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::SingleClassInput, "both classes must be present");
  const double np = static_cast<double>(n_pos);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

SummaryStats summary_stats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values to summarize");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.n = sorted.size();
  // Summing in sorted order keeps the result independent of input order.
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double sq = 0.0;
  for (double v : sorted) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / n);
  s.min = sorted.front();
  s.max = sorted.back();
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
  // Rounding in the mean can push it a hair outside [min, max] for constant input.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

EvalSummary summarize(std::span<const EvalRecord> records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to summarize");
  std::vector<double> d, sp, ap;
  for (const EvalRecord& r : records) {
    d.push_back(r.dice);
    sp.push_back(r.signed_pct_error);
    ap.push_back(r.abs_pct_error);
  }
  return {summary_stats(d), summary_stats(sp), summary_stats(ap)};
}

}  // namespace sarco
