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

#include "sarco/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "json.hpp"
#include "sarco/error.hpp"
#include "sarco/geometry.hpp"
#include "sarco/io.hpp"
#include "sarco/nifti.hpp"
#include "sarco/preprocess.hpp"

namespace sarco {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

struct CsvTable {
  std::map<std::string, std::size_t> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

CsvTable read_csv(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  CsvTable table;
  bool header = true;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (header) {
      for (std::size_t c = 0; c < fields.size(); ++c) table.columns[lower(fields[c])] = c;
      header = false;
    } else {
      table.rows.push_back(std::move(fields));
      table.line_numbers.push_back(line_no);
    }
    if (end == text.size()) break;
  }
  if (header) throw Error(ErrorCode::NoInput, path.string() + " has no header row");
  return table;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string opt_bool(const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : ""; }
std::string opt_sex(const std::optional<Sex>& s) { return s ? std::string(to_string(*s)) : ""; }

ordered_json json_opt(const std::optional<bool>& b) { return b ? ordered_json(*b) : ordered_json(nullptr); }
ordered_json json_opt(const std::optional<double>& d) { return d ? ordered_json(*d) : ordered_json(nullptr); }
ordered_json json_opt(const std::optional<Sex>& s) {
  return s ? ordered_json(std::string(to_string(*s))) : ordered_json(nullptr);
}

std::string config_comment_block(const RunConfig& config, const std::string& kind) {
  std::string out = "# sarcoscan " + kind + " report\n";
  for (const auto& [key, value] : config.entries()) out += "# config." + key + "=" + value + "\n";
  return out;
}

ordered_json config_json(const RunConfig& config) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : config.entries()) j[key] = value;
  return j;
}

ordered_json stats_json(const SummaryStats& s) {
  return ordered_json{{"n", s.n}, {"mean", s.mean}, {"std", s.std}, {"median", s.median}, {"min", s.min}, {"max", s.max}};
}

ordered_json classification_json(const ClassificationMetrics& m) {
  return ordered_json{{"tp", m.tp},
                      {"fp", m.fp},
                      {"fn", m.fn},
                      {"tn", m.tn},
                      {"accuracy", m.accuracy},
                      {"precision", json_opt(m.precision)},
                      {"recall", json_opt(m.recall)},
                      {"f1", json_opt(m.f1)}};
}

std::string pct2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

template <class T>
Volume<T> to_target(const Volume<T>& v, const RunConfig& config) {
  return reorient(v, config.target_orientation);
}

}  // namespace

CtVolume preprocess_volume(const CtVolume& volume, const RunConfig& config) {
  config.validate();
  validate(volume);
  CtVolume v = reorient(volume, config.target_orientation);
  v = resample(v, config.target_spacing, Interp::Trilinear);
  v = clip_hu(v, config.hu_window);
  if (config.augment) {
    std::mt19937_64 rng(config.seed);
    const AugmentParams params = sample_augmentation(rng, config.augment_config);
    v = augment(v, params, static_cast<float>(config.hu_window.lo));
  }
  if (config.normalize) v = normalize_unit(v, config.hu_window);
  return v;
}

void require_same_geometry(const Dims& dims_a, const Affine& affine_a, const Dims& dims_b, const Affine& affine_b) {
  if (dims_a != dims_b)
    throw Error(ErrorCode::GeometryMismatch,
                "dims " + std::to_string(dims_a[0]) + "x" + std::to_string(dims_a[1]) + "x" + std::to_string(dims_a[2]) +
                    " vs " + std::to_string(dims_b[0]) + "x" + std::to_string(dims_b[1]) + "x" +
                    std::to_string(dims_b[2]));
  if (!affine_a.approx_equal(affine_b, 1e-4)) throw Error(ErrorCode::GeometryMismatch, "affines differ by more than 1e-4");
}

MeasureRow measure_pair(const CtVolume& image, const MaskVolume& mask, std::optional<Sex> sex,
                        const RunConfig& config, const std::string& scan_id) {
  config.validate();
  check_shape(image);
  validate(mask);
  const CtVolume img = to_target(image, config);
  const MaskVolume m = to_target(mask, config);
  require_same_geometry(img.dims, img.affine, m.dims, m.affine);

  const SmaMeasurement sma = measure(m, config.slice_policy);
  MeasureRow row;
  row.scan_id = scan_id;
  row.area_cm2 = sma.area_cm2;
  row.pixel_count = sma.pixel_count;
  row.slice_index = sma.slice_index;
  row.pixel_area_mm2 = sma.pixel_area_mm2;
  if (sex) {
    const SarcopeniaAssessment a = classify(sma.area_cm2, *sex, config.cutoffs);
    row.sex = sex;
    row.cutoff_cm2 = a.cutoff_cm2;
    row.sarcopenic = a.sarcopenic;
  }
  return row;
}

EvalRecord ReportRow::record() const {
  return {scan_id, dice, gt_area_cm2, pred_area_cm2, abs_pct_error, signed_pct_error, gt_sarcopenic, pred_sarcopenic};
}

bool parse_label(std::string_view text) {
  const std::string s = lower(trim(text));
  if (s == "yes" || s == "true" || s == "1" || s == "positive" || s == "y") return true;
  if (s == "no" || s == "false" || s == "0" || s == "negative" || s == "n") return false;
  throw Error(ErrorCode::InvalidArgument, "cannot read '" + std::string(text) + "' as a yes/no label");
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  for (const char* required : {"scan_id", "gt_mask_path", "pred_mask_path"})
    if (!table.columns.count(required))
      throw Error(ErrorCode::InvalidArgument, path.string() + ": missing column " + required);
  const std::filesystem::path base = path.parent_path();
  auto column = [&](const std::vector<std::string>& row, const char* name) -> std::string {
    auto it = table.columns.find(name);
    if (it == table.columns.end() || it->second >= row.size()) return {};
    return row[it->second];
  };
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  std::vector<ManifestEntry> entries;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    ManifestEntry e;
    e.scan_id = column(row, "scan_id");
    const std::string gt = column(row, "gt_mask_path");
    const std::string pred = column(row, "pred_mask_path");
    if (e.scan_id.empty() || gt.empty() || pred.empty())
      throw Error(ErrorCode::InvalidArgument, where + ": scan_id, gt_mask_path and pred_mask_path are required");
    e.gt_mask = resolve(gt);
    e.pred_mask = resolve(pred);
    try {
      if (auto s = column(row, "sex"); !s.empty()) e.sex = parse_sex(s);
      if (auto l = column(row, "gt_label"); !l.empty()) e.gt_label = parse_label(l);
    } catch (const Error& err) {
      throw Error(ErrorCode::InvalidArgument, where + ": " + err.what());
    }
    entries.push_back(std::move(e));
  }
  if (entries.empty()) throw Error(ErrorCode::NoInput, path.string() + " lists no pairs");
  return entries;
}

ReportRow evaluate_pair(const MaskVolume& gt_in, const MaskVolume& pred_in, const ManifestEntry& entry,
                        const RunConfig& config) {
  validate(gt_in);
  validate(pred_in);
  const MaskVolume gt = to_target(gt_in, config);
  const MaskVolume pred = to_target(pred_in, config);
  require_same_geometry(gt.dims, gt.affine, pred.dims, pred.affine);

  ReportRow row;
  row.scan_id = entry.scan_id;
  SmaMeasurement gt_sma;
  SmaMeasurement pred_sma;
  if (config.slice_policy.kind == SlicePolicy::Kind::Sum) {
    gt_sma = measure(gt, config.slice_policy);
    pred_sma = gt_sma;
    pred_sma.pixel_count = static_cast<std::uint64_t>(std::count(pred.samples.begin(), pred.samples.end(), 1));
    pred_sma.area_cm2 = static_cast<double>(pred_sma.pixel_count) * pred_sma.pixel_area_mm2 / 100.0;
    row.dice = dice(gt, pred);
  } else {
    gt_sma = measure(gt, config.slice_policy);
    const auto k = static_cast<std::size_t>(gt_sma.slice_index);
    pred_sma = compute_sma(pred, k);
    const int axis = axial_axis(gt.affine);
    row.dice = dice(extract_slice(gt, axis, k), extract_slice(pred, axis, k));
  }
  row.gt_area_cm2 = gt_sma.area_cm2;
  row.pred_area_cm2 = pred_sma.area_cm2;
  row.slice_index = gt_sma.slice_index;
  row.pixel_area_mm2 = gt_sma.pixel_area_mm2;
  const AreaErrors err = area_errors(row.gt_area_cm2, row.pred_area_cm2);
  row.signed_pct_error = err.signed_pct;
  row.abs_pct_error = err.abs_pct;

  row.sex = entry.sex;
  if (entry.gt_label) row.gt_sarcopenic = entry.gt_label;
  if (entry.sex) {
    if (!row.gt_sarcopenic) row.gt_sarcopenic = classify(row.gt_area_cm2, *entry.sex, config.cutoffs).sarcopenic;
    row.pred_sarcopenic = classify(row.pred_area_cm2, *entry.sex, config.cutoffs).sarcopenic;
  }
  return row;
}

EvaluationReport evaluate_manifest(const std::vector<ManifestEntry>& entries, const RunConfig& config) {
  config.validate();
  EvaluationReport report;
  for (const ManifestEntry& e : entries) {
    try {
      const MaskVolume gt = nifti::load_mask(e.gt_mask);
      const MaskVolume pred = nifti::load_mask(e.pred_mask);
      report.rows.push_back(evaluate_pair(gt, pred, e, config));
    } catch (const Error& err) {
      report.failures.push_back({e.scan_id, err.what()});
    }
  }
  if (!report.rows.empty()) {
    std::vector<EvalRecord> records;
    std::vector<Prediction> pairs;
    for (const ReportRow& r : report.rows) {
      records.push_back(r.record());
      if (r.gt_sarcopenic && r.pred_sarcopenic) pairs.push_back({*r.pred_sarcopenic, *r.gt_sarcopenic});
    }
    report.summary = summarize(records);
    if (!pairs.empty()) report.classification = confusion_metrics(pairs);
  }
  return report;
}

std::vector<ScoreEntry> read_scores(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  for (const char* required : {"scan_id", "score", "label"})
    if (!table.columns.count(required))
      throw Error(ErrorCode::InvalidArgument, path.string() + ": missing column " + required);
  std::vector<ScoreEntry> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
    auto get = [&](const char* name) -> std::string {
      const std::size_t c = table.columns.at(name);
      return c < row.size() ? row[c] : std::string();
    };
    ScoreEntry e;
    e.scan_id = get("scan_id");
    const std::string score = get("score");
    auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), e.score);
    if (score.empty() || ec != std::errc() || ptr != score.data() + score.size())
      throw Error(ErrorCode::InvalidArgument, where + ": bad score '" + score + "'");
    try {
      e.label = parse_label(get("label"));
    } catch (const Error& err) {
      throw Error(ErrorCode::InvalidArgument, where + ": " + err.what());
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, path.string() + " lists no scores");
  return out;
}

std::string render_measure(const MeasureRow& row, const RunConfig& config) {
  if (config.output_format == OutputFormat::Json) {
    ordered_json j;
    j["kind"] = "measurement";
    j["config"] = config_json(config);
    j["row"] = ordered_json{{"scan_id", row.scan_id},
                            {"area_cm2", row.area_cm2},
                            {"pixel_count", row.pixel_count},
                            {"slice_index", row.slice_index},
                            {"pixel_area_mm2", row.pixel_area_mm2},
                            {"sex", json_opt(row.sex)},
                            {"cutoff_cm2", json_opt(row.cutoff_cm2)},
                            {"sarcopenic", json_opt(row.sarcopenic)}};
    return j.dump(2) + "\n";
  }
  std::string out = config_comment_block(config, "measurement");
  out += "scan_id,area_cm2,pixel_count,slice_index,pixel_area_mm2,sex,cutoff_cm2,sarcopenic\n";
  out += csv_field(row.scan_id) + "," + format_number(row.area_cm2) + "," + std::to_string(row.pixel_count) + "," +
         std::to_string(row.slice_index) + "," + format_number(row.pixel_area_mm2) + "," + opt_sex(row.sex) + "," +
         (row.cutoff_cm2 ? format_number(*row.cutoff_cm2) : "") + "," + opt_bool(row.sarcopenic) + "\n";
  return out;
}

std::string render_evaluation(const EvaluationReport& report, const RunConfig& config) {
  if (config.output_format == OutputFormat::Json) {
    ordered_json j;
    j["kind"] = "evaluation";
    j["config"] = config_json(config);
    ordered_json rows = ordered_json::array();
    for (const ReportRow& r : report.rows)
      rows.push_back(ordered_json{{"scan_id", r.scan_id},
                                  {"gt_area_cm2", r.gt_area_cm2},
                                  {"pred_area_cm2", r.pred_area_cm2},
                                  {"dice", r.dice},
                                  {"abs_pct_error", r.abs_pct_error},
                                  {"signed_pct_error", r.signed_pct_error},
                                  {"sex", json_opt(r.sex)},
                                  {"gt_sarcopenic", json_opt(r.gt_sarcopenic)},
                                  {"pred_sarcopenic", json_opt(r.pred_sarcopenic)},
                                  {"slice_index", r.slice_index},
                                  {"pixel_area_mm2", r.pixel_area_mm2}});
    j["rows"] = rows;
    ordered_json failures = ordered_json::array();
    for (const RowFailure& f : report.failures) failures.push_back({{"scan_id", f.scan_id}, {"error", f.message}});
    j["failures"] = failures;
    if (report.summary) {
      j["summary"] = ordered_json{{"dice", stats_json(report.summary->dice)},
                                  {"signed_pct_error", stats_json(report.summary->signed_pct_error)},
                                  {"abs_pct_error", stats_json(report.summary->abs_pct_error)}};
    } else {
      j["summary"] = nullptr;
    }
    j["classification"] = report.classification ? classification_json(*report.classification) : ordered_json(nullptr);
    return j.dump(2) + "\n";
  }

  std::string out = config_comment_block(config, "evaluation");
  out += "scan_id,gt_area_cm2,pred_area_cm2,dice,abs_pct_error,signed_pct_error,sex,gt_sarcopenic,pred_sarcopenic,"
         "slice_index,pixel_area_mm2\n";
  for (const ReportRow& r : report.rows) {
    out += csv_field(r.scan_id) + "," + format_number(r.gt_area_cm2) + "," + format_number(r.pred_area_cm2) + "," +
           format_number(r.dice) + "," + format_number(r.abs_pct_error) + "," + format_number(r.signed_pct_error) + "," +
           opt_sex(r.sex) + "," + opt_bool(r.gt_sarcopenic) + "," + opt_bool(r.pred_sarcopenic) + "," +
           std::to_string(r.slice_index) + "," + format_number(r.pixel_area_mm2) + "\n";
  }
  for (const RowFailure& f : report.failures) out += "# failed." + one_line(f.scan_id) + "=" + one_line(f.message) + "\n";
  if (report.summary) {
    auto block = [&](const char* name, const SummaryStats& s) {
      const std::string p = std::string("# summary.") + name + ".";
      out += p + "n=" + std::to_string(s.n) + "\n" + p + "mean=" + format_number(s.mean) + "\n" + p +
             "std=" + format_number(s.std) + "\n" + p + "median=" + format_number(s.median) + "\n" + p +
             "min=" + format_number(s.min) + "\n" + p + "max=" + format_number(s.max) + "\n";
    };
    block("dice", report.summary->dice);
    block("signed_pct_error", report.summary->signed_pct_error);
    block("abs_pct_error", report.summary->abs_pct_error);
  }
  if (report.classification) {
    const ClassificationMetrics& m = *report.classification;
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("undefined"); };
    out += "# classification.tp=" + std::to_string(m.tp) + "\n# classification.fp=" + std::to_string(m.fp) +
           "\n# classification.fn=" + std::to_string(m.fn) + "\n# classification.tn=" + std::to_string(m.tn) +
           "\n# classification.accuracy=" + format_number(m.accuracy) + "\n# classification.precision=" +
           opt(m.precision) + "\n# classification.recall=" + opt(m.recall) + "\n# classification.f1=" + opt(m.f1) +
           "\n";
  }
  return out;
}

std::string render_evaluation_summary(const EvaluationReport& report) {
  std::string out = "pairs: " + std::to_string(report.rows.size()) + " evaluated, " +
                    std::to_string(report.failures.size()) + " failed\n";
  if (report.summary) {
    const EvalSummary& s = *report.summary;
    out += "dice: mean " + fixed4(s.dice.mean) + ", std " + fixed4(s.dice.std) + ", median " + fixed4(s.dice.median) +
           ", min " + fixed4(s.dice.min) + ", max " + fixed4(s.dice.max) + "\n";
    out += "abs area error %: mean " + pct2(s.abs_pct_error.mean) + ", std " + pct2(s.abs_pct_error.std) +
           ", median " + pct2(s.abs_pct_error.median) + ", min " + pct2(s.abs_pct_error.min) + ", max " +
           pct2(s.abs_pct_error.max) + "\n";
    out += "signed area error %: mean " + pct2(s.signed_pct_error.mean) + ", std " + pct2(s.signed_pct_error.std) +
           ", median " + pct2(s.signed_pct_error.median) + "\n";
  }
  if (report.classification) {
    const ClassificationMetrics& m = *report.classification;
    const std::size_t total = m.tp + m.fp + m.fn + m.tn;
    auto opt = [](const std::optional<double>& v) { return v ? fixed4(*v) : std::string("undefined"); };
    out += "sarcopenia agreement: " + std::to_string(m.tp + m.tn) + "/" + std::to_string(total) + " (" +
           pct2(100.0 * m.accuracy) + "%), tp " + std::to_string(m.tp) + ", fp " + std::to_string(m.fp) + ", fn " +
           std::to_string(m.fn) + ", tn " + std::to_string(m.tn) + "\n";
    out += "precision " + opt(m.precision) + ", recall " + opt(m.recall) + ", f1 " + opt(m.f1) + "\n";
  }
  for (const RowFailure& f : report.failures) out += "failed " + f.scan_id + ": " + one_line(f.message) + "\n";
  return out;
}

std::string render_scores(const std::vector<ScoreEntry>& scores, double auc, const RunConfig& config) {
  if (config.output_format == OutputFormat::Json) {
    ordered_json j;
    j["kind"] = "scores";
    j["config"] = config_json(config);
    ordered_json rows = ordered_json::array();
    for (const ScoreEntry& s : scores) rows.push_back({{"scan_id", s.scan_id}, {"score", s.score}, {"label", s.label}});
    j["rows"] = rows;
    j["roc_auc"] = auc;
    return j.dump(2) + "\n";
  }
  std::string out = config_comment_block(config, "scores");
  out += "scan_id,score,label\n";
  for (const ScoreEntry& s : scores)
    out += csv_field(s.scan_id) + "," + format_number(s.score) + "," + (s.label ? "true" : "false") + "\n";
  out += "# summary.roc_auc=" + format_number(auc) + "\n";
  return out;
}

std::string phantom_sidecar_json(const PhantomSpec& spec, const Phantom& phantom) {
  const auto count = static_cast<std::uint64_t>(std::count(phantom.mask.samples.begin(), phantom.mask.samples.end(), 1));
  const double pixel_area = slice_pixel_area(phantom.mask.affine, 2);
  ordered_json j;
  j["kind"] = "phantom";
  j["spec"] = ordered_json{{"dims", {spec.dims[0], spec.dims[1], spec.dims[2]}},
                           {"spacing", {spec.spacing.sx, spec.spacing.sy, spec.spacing.sz}},
                           {"outer_a_mm", spec.outer_a_mm},
                           {"outer_b_mm", spec.outer_b_mm},
                           {"ring_thickness_mm", spec.ring_thickness_mm},
                           {"muscle_hu", spec.muscle_hu},
                           {"interior_hu", spec.interior_hu},
                           {"background_hu", spec.background_hu},
                           {"annotated_slice", spec.annotated_slice},
                           {"noise_sd", spec.noise_sd},
                           {"seed", spec.seed}};
  j["analytic_area_cm2"] = phantom.analytic_area_cm2;
  j["raster_pixel_count"] = count;
  j["raster_area_cm2"] = static_cast<double>(count) * pixel_area / 100.0;
  return j.dump(2) + "\n";
}

}  // namespace sarco
