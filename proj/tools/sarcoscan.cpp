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

// sarcoscan: command-line front end over the libsarco C interface.
//
// Exit codes: 0 success, 1 processing failure (including any failed
// evaluation row), 2 bad invocation.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sarco/sarco.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Thrown for any failed library call; carries the exit code to use.
struct Failure {
  int exit_code;
  std::string message;
};

void check(sarco_status status, const std::string& context, int exit_code = kExitFailure) {
  if (status == SARCO_OK) return;
  std::string msg = sarco_last_error();
  if (msg.empty()) msg = sarco_status_name(status);
  throw Failure{exit_code, context.empty() ? msg : context + ": " + msg};
}

struct VolumeDeleter {
  void operator()(sarco_volume* v) const { sarco_volume_destroy(v); }
};
using VolumePtr = std::unique_ptr<sarco_volume, VolumeDeleter>;

struct ConfigDeleter {
  void operator()(sarco_config* c) const { sarco_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<sarco_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { sarco_free_string(s); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) {
  StringPtr owned(s);
  return s ? std::string(s) : std::string();
}

VolumePtr load(const std::string& path, sarco_volume_kind kind) {
  sarco_volume* v = nullptr;
  check(sarco_volume_load(path.c_str(), kind, &v), "");
  return VolumePtr(v);
}

void save(const sarco_volume* v, const std::string& path) { check(sarco_volume_save(v, path.c_str()), ""); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Failure{kExitFailure, "IoError: cannot write " + path};
}

// Sends a report to --out when given, otherwise to stdout.
void emit(const std::optional<std::string>& out_path, const std::string& text) {
  if (out_path)
    write_text(*out_path, text);
  else
    std::cout << text;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Config flags shared by every subcommand, in the order they are applied.
struct ConfigFlags {
  std::optional<std::string> config_file;
  std::vector<std::pair<std::string, std::optional<std::string>>> values{
      {"orientation", {}}, {"spacing", {}},       {"hu-lo", {}},        {"hu-hi", {}},
      {"cutoff-male", {}}, {"cutoff-female", {}}, {"slice-policy", {}}, {"format", {}},
      {"seed", {}},
  };

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value config file; flags override it");
    const char* help[] = {"target orientation code, e.g. RAS",
                          "target voxel spacing in mm: one value or x,y,z",
                          "HU window floor",
                          "HU window ceiling",
                          "male SMA cutoff in cm^2",
                          "female SMA cutoff in cm^2",
                          "single | sum | largest | index=<k>",
                          "report format: csv | json",
                          "seed for augmentation and phantom noise"};
    for (std::size_t i = 0; i < values.size(); ++i)
      app.add_option("--" + values[i].first, values[i].second, help[i]);
  }

  ConfigPtr build() const {
    sarco_config* raw = nullptr;
    check(sarco_config_create(&raw), "");
    ConfigPtr cfg(raw);
    if (config_file) check(sarco_config_load_file(cfg.get(), config_file->c_str()), *config_file, kExitUsage);
    for (const auto& [key, value] : values)
      if (value) check(sarco_config_set(cfg.get(), key.c_str(), value->c_str()), "--" + key, kExitUsage);
    check(sarco_config_validate(cfg.get()), "config", kExitUsage);
    return cfg;
  }
};

int run_info(const std::string& path, bool as_mask) {
  VolumePtr v = load(path, as_mask ? SARCO_VOLUME_MASK : SARCO_VOLUME_CT);
  sarco_volume_info info{};
  check(sarco_volume_get_info(v.get(), &info), path);
  std::cout << "path: " << path << "\n"
            << "kind: " << (as_mask ? "mask" : "ct") << "\n"
            << "dims: " << info.dims[0] << " x " << info.dims[1] << " x " << info.dims[2] << "\n"
            << "spacing_mm: " << num(info.spacing[0]) << " x " << num(info.spacing[1]) << " x "
            << num(info.spacing[2]) << "\n"
            << "orientation: " << info.orientation << "\n"
            << (as_mask ? "value_range: " : "hu_range: ") << num(info.min_value) << " .. " << num(info.max_value)
            << "\n";
  if (!as_mask) std::cout << "samples_outside_-1024..3071: " << info.outside_hu_range << "\n";
  std::cout << "affine:\n";
  for (int r = 0; r < 4; ++r) {
    std::cout << " ";
    for (int c = 0; c < 4; ++c) std::cout << " " << num(info.affine[r * 4 + c]);
    std::cout << "\n";
  }
  return 0;
}

int run_convert(const std::string& dir, const std::string& out) {
  sarco_volume* raw = nullptr;
  std::size_t count = 0;
  double step = 0.0;
  char* warnings = nullptr;
  const sarco_status st = sarco_dicom_convert(dir.c_str(), &raw, &count, &step, &warnings);
  const std::string w = take(warnings);
  if (!w.empty()) std::cerr << w;
  check(st, dir);
  VolumePtr v(raw);
  save(v.get(), out);
  sarco_volume_info info{};
  check(sarco_volume_get_info(v.get(), &info), out);
  std::cout << "slices: " << count << "\n"
            << "slice_step_mm: " << num(step) << "\n"
            << "dims: " << info.dims[0] << " x " << info.dims[1] << " x " << info.dims[2] << "\n"
            << "spacing_mm: " << num(info.spacing[0]) << " x " << num(info.spacing[1]) << " x "
            << num(info.spacing[2]) << "\n"
            << "wrote: " << out << "\n";
  return 0;
}

int run_preprocess(const std::string& in, const std::string& out, const sarco_config* cfg) {
  VolumePtr v = load(in, SARCO_VOLUME_CT);
  sarco_volume* raw = nullptr;
  check(sarco_preprocess(v.get(), cfg, &raw), in);
  VolumePtr result(raw);
  save(result.get(), out);
  return 0;
}

int run_segment(const std::string& in, const std::string& out, std::int64_t slice, const sarco_config* cfg) {
  VolumePtr v = load(in, SARCO_VOLUME_CT);
  sarco_volume* raw = nullptr;
  check(sarco_segment(v.get(), slice, cfg, &raw), in);
  VolumePtr mask(raw);
  save(mask.get(), out);
  return 0;
}

int run_measure(const std::string& image, const std::string& mask, const std::optional<std::string>& sex,
                const std::optional<std::string>& scan_id, const std::optional<std::string>& out,
                const sarco_config* cfg) {
  VolumePtr img = load(image, SARCO_VOLUME_CT);
  VolumePtr m = load(mask, SARCO_VOLUME_MASK);
  char* report = nullptr;
  const std::string id = scan_id ? *scan_id : std::filesystem::path(image).filename().string();
  check(sarco_measure(img.get(), m.get(), sex ? sex->c_str() : nullptr, id.c_str(), cfg, &report), mask);
  emit(out, take(report));
  return 0;
}

int run_evaluate(const std::optional<std::string>& manifest, const std::optional<std::string>& scores,
                 const std::optional<std::string>& out, const sarco_config* cfg) {
  if (scores) {
    char* report = nullptr;
    double auc = 0.0;
    check(sarco_evaluate_scores(scores->c_str(), cfg, &report, &auc), *scores);
    emit(out, take(report));
    (out ? std::cout : std::cerr) << "roc_auc: " << num(auc) << "\n";
    return 0;
  }
  char* report = nullptr;
  char* summary = nullptr;
  std::size_t failed = 0;
  check(sarco_evaluate(manifest->c_str(), cfg, &report, &summary, &failed), *manifest);
  emit(out, take(report));
  (out ? std::cout : std::cerr) << take(summary);
  return failed == 0 ? 0 : kExitFailure;
}

struct PhantomFlags {
  std::string dims = "160x128x3";
  std::string voxel_mm = "1";
  double a = 60.0;
  double b = 40.0;
  double thickness = 10.0;
  double muscle_hu = 50.0;
  double interior_hu = -100.0;
  double background_hu = -1000.0;
  std::size_t annotated_slice = 1;
  double noise_sd = 0.0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    parts.push_back(s.substr(start, at - start));
    if (at == std::string::npos) break;
    start = at + 1;
  }
  return parts;
}

int run_phantom(const std::string& prefix, const PhantomFlags& f, const std::optional<std::string>& seed) {
  sarco_phantom_spec spec;
  sarco_phantom_spec_default(&spec);
  try {
    const auto d = split(f.dims, 'x');
    if (d.size() != 3) throw std::invalid_argument("dims");
    for (int i = 0; i < 3; ++i) spec.dims[i] = std::stoull(d[i]);
    const auto s = split(f.voxel_mm, ',');
    if (s.size() != 1 && s.size() != 3) throw std::invalid_argument("voxel-mm");
    for (int i = 0; i < 3; ++i) spec.spacing[i] = std::stod(s[s.size() == 1 ? 0 : i]);
    if (seed) spec.seed = std::stoull(*seed);
  } catch (const std::exception&) {
    throw Failure{kExitUsage, "InvalidArgument: --dims takes NXxNYxNZ, --voxel-mm one value or x,y,z, --seed an integer"};
  }
  spec.outer_a_mm = f.a;
  spec.outer_b_mm = f.b;
  spec.ring_thickness_mm = f.thickness;
  spec.muscle_hu = f.muscle_hu;
  spec.interior_hu = f.interior_hu;
  spec.background_hu = f.background_hu;
  spec.annotated_slice = f.annotated_slice;
  spec.noise_sd = f.noise_sd;

  sarco_volume* ct = nullptr;
  sarco_volume* mask = nullptr;
  double area = 0.0;
  char* sidecar = nullptr;
  check(sarco_phantom_generate(&spec, &ct, &mask, &area, &sidecar), "phantom");
  VolumePtr ct_owned(ct);
  VolumePtr mask_owned(mask);
  const std::string json = take(sidecar);
  save(ct, prefix + "_ct.nii.gz");
  save(mask, prefix + "_mask.nii.gz");
  write_text(prefix + "_truth.json", json);
  std::cout << "analytic_area_cm2: " << num(area) << "\n"
            << "wrote: " << prefix << "_ct.nii.gz, " << prefix << "_mask.nii.gz, " << prefix << "_truth.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sarcoscan: skeletal muscle area measurement and evaluation"};
  app.require_subcommand(1);
  ConfigFlags flags;

  std::string info_path;
  bool info_mask = false;
  auto* info = app.add_subcommand("info", "summarize a NIfTI volume");
  info->add_option("path", info_path, "NIfTI file")->required();
  info->add_flag("--mask", info_mask, "load as a binary mask");

  std::string convert_dir, convert_out;
  auto* convert = app.add_subcommand("convert", "assemble a DICOM series into NIfTI");
  convert->add_option("dicom_dir", convert_dir, "directory holding one series")->required();
  convert->add_option("out", convert_out, "output .nii or .nii.gz")->required();

  std::string pre_in, pre_out;
  auto* preprocess = app.add_subcommand("preprocess", "reorient, resample, clip and normalize a CT volume");
  preprocess->add_option("image", pre_in, "input CT")->required();
  preprocess->add_option("out", pre_out, "output file")->required();

  std::string seg_in, seg_out;
  std::int64_t seg_slice = -1;
  auto* segment = app.add_subcommand("segment", "threshold-and-morphology muscle segmentation of one slice");
  segment->add_option("image", seg_in, "input CT")->required();
  segment->add_option("out", seg_out, "output mask")->required();
  segment->add_option("--slice", seg_slice, "axial slice index (default: middle)");

  std::string m_image, m_mask;
  std::optional<std::string> m_sex, m_scan_id, m_out;
  auto* measure = app.add_subcommand("measure", "SMA of an annotated slice, with optional sarcopenia call");
  measure->add_option("image", m_image, "CT volume")->required();
  measure->add_option("mask", m_mask, "muscle mask")->required();
  measure->add_option("--sex", m_sex, "male | female");
  measure->add_option("--scan-id", m_scan_id, "scan identifier for the report (default: image file name)");
  measure->add_option("-o,--out", m_out, "report file (default: stdout)");

  std::optional<std::string> e_manifest, e_scores, e_out;
  auto* evaluate = app.add_subcommand("evaluate", "compare predicted masks with ground truth, or score AUC");
  auto* manifest_opt = evaluate->add_option("manifest", e_manifest, "CSV: scan_id,gt_mask_path,pred_mask_path[,sex][,gt_label]");
  auto* scores_opt = evaluate->add_option("--scores", e_scores, "CSV: scan_id,score,label; reports ROC AUC");
  manifest_opt->excludes(scores_opt);
  evaluate->add_option("-o,--out", e_out, "report file (default: stdout)");

  std::string p_prefix;
  PhantomFlags pf;
  auto* phantom = app.add_subcommand("phantom", "write a synthetic elliptical-ring CT, mask and truth sidecar");
  phantom->add_option("out_prefix", p_prefix, "writes <prefix>_ct.nii.gz, <prefix>_mask.nii.gz, <prefix>_truth.json")
      ->required();
  phantom->add_option("--dims", pf.dims, "NXxNYxNZ")->capture_default_str();
  phantom->add_option("--voxel-mm", pf.voxel_mm, "voxel size: one value or x,y,z")->capture_default_str();
  phantom->add_option("--a", pf.a, "outer semi-axis along x, mm")->capture_default_str();
  phantom->add_option("--b", pf.b, "outer semi-axis along y, mm")->capture_default_str();
  phantom->add_option("--thickness", pf.thickness, "ring thickness, mm")->capture_default_str();
  phantom->add_option("--muscle-hu", pf.muscle_hu)->capture_default_str();
  phantom->add_option("--interior-hu", pf.interior_hu)->capture_default_str();
  phantom->add_option("--background-hu", pf.background_hu)->capture_default_str();
  phantom->add_option("--annotated-slice", pf.annotated_slice)->capture_default_str();
  phantom->add_option("--noise-sd", pf.noise_sd, "Gaussian noise on the CT, HU")->capture_default_str();

  for (CLI::App* sub : {info, convert, preprocess, segment, measure, evaluate, phantom}) flags.attach(*sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (evaluate->parsed() && !e_manifest && !e_scores)
      throw Failure{kExitUsage, "evaluate needs a manifest or --scores"};
    if (phantom->parsed() && flags.values[1].second)
      throw Failure{kExitUsage, "phantom takes --voxel-mm, not --spacing"};
    ConfigPtr cfg = flags.build();

    if (info->parsed()) return run_info(info_path, info_mask);
    if (convert->parsed()) return run_convert(convert_dir, convert_out);
    if (preprocess->parsed()) return run_preprocess(pre_in, pre_out, cfg.get());
    if (segment->parsed()) return run_segment(seg_in, seg_out, seg_slice, cfg.get());
    if (measure->parsed()) return run_measure(m_image, m_mask, m_sex, m_scan_id, m_out, cfg.get());
    if (evaluate->parsed()) return run_evaluate(e_manifest, e_scores, e_out, cfg.get());
    if (phantom->parsed()) return run_phantom(p_prefix, pf, flags.values[8].second);
  } catch (const Failure& f) {
    std::cerr << "sarcoscan: " << f.message << "\n";
    return f.exit_code;
  }
  return kExitUsage;
}
