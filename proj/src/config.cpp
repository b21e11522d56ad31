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

#include "sarco/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sarco/error.hpp"
#include "sarco/io.hpp"

namespace sarco {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Error(ErrorCode::ConfigError, std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

template <class Int>
Int to_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::ConfigError, std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::ConfigError, std::string(key) + ": expected true/false");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t at = text.find(sep);
    parts.push_back(trim(text.substr(0, at)));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return parts;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void RunConfig::set(std::string_view key, std::string_view value) {
  try {
    if (key == "orientation") {
      target_orientation = OrientationCode::parse(trim(value));
    } else if (key == "spacing") {
      const auto parts = split(value, ',');
      if (parts.size() == 1) {
        const double s = to_double(key, parts[0]);
        target_spacing = {s, s, s};
      } else if (parts.size() == 3) {
        target_spacing = {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
      } else {
        throw Error(ErrorCode::ConfigError, "spacing: expected one value or three comma-separated values");
      }
      target_spacing.validate();
    } else if (key == "hu-lo") {
      hu_window.lo = to_double(key, value);
    } else if (key == "hu-hi") {
      hu_window.hi = to_double(key, value);
    } else if (key == "cutoff-male") {
      cutoffs.male_cm2 = to_double(key, value);
    } else if (key == "cutoff-female") {
      cutoffs.female_cm2 = to_double(key, value);
    } else if (key == "slice-policy") {
      slice_policy = SlicePolicy::parse(trim(value));
    } else if (key == "format") {
      const auto v = trim(value);
      if (v == "csv") output_format = OutputFormat::Csv;
      else if (v == "json") output_format = OutputFormat::Json;
      else throw Error(ErrorCode::ConfigError, "format: expected csv or json");
    } else if (key == "seed") {
      seed = to_int<std::uint64_t>(key, value);
    } else if (key == "muscle-lo") {
      seg_params.muscle_window.lo = to_double(key, value);
    } else if (key == "muscle-hi") {
      seg_params.muscle_window.hi = to_double(key, value);
    } else if (key == "body-threshold") {
      seg_params.body_threshold_hu = to_double(key, value);
    } else if (key == "opening-radius") {
      seg_params.opening_radius_px = to_int<int>(key, value);
    } else if (key == "min-component-mm2") {
      seg_params.min_component_mm2 = to_double(key, value);
    } else if (key == "normalize") {
      normalize = to_bool(key, value);
    } else if (key == "augment") {
      augment = to_bool(key, value);
    } else if (key == "rotate-max-deg") {
      augment_config.max_rotation_deg = to_double(key, value);
    } else if (key == "crop") {
      const auto parts = split(value, 'x');
      if (parts.size() != 2) throw Error(ErrorCode::ConfigError, "crop: expected <x>x<y>, e.g. 192x192");
      augment_config.crop_x = to_int<std::size_t>(key, parts[0]);
      augment_config.crop_y = to_int<std::size_t>(key, parts[1]);
    } else if (key == "std-divisor") {
      if (trim(value) != "N") throw Error(ErrorCode::ConfigError, "std-divisor: only N (population) is supported");
    } else {
      throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, std::string(key) + ": " + e.what());
  }
}

void RunConfig::load_text(std::string_view text) {
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key=value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  load_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void RunConfig::validate() const {
  try {
    target_orientation.validate();
    target_spacing.validate();
    hu_window.validate();
    seg_params.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (!(cutoffs.male_cm2 > 0) || !(cutoffs.female_cm2 > 0))
    throw Error(ErrorCode::ConfigError, "cutoffs must be positive");
  if (augment_config.crop_x == 0 || augment_config.crop_y == 0)
    throw Error(ErrorCode::ConfigError, "crop extents must be >= 1");
  if (!(augment_config.max_rotation_deg >= 0))
    throw Error(ErrorCode::ConfigError, "rotate-max-deg must be >= 0");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  const auto num = format_number;
  return {
      {"orientation", target_orientation.str()},
      {"spacing", num(target_spacing.sx) + "," + num(target_spacing.sy) + "," + num(target_spacing.sz)},
      {"hu-lo", num(hu_window.lo)},
      {"hu-hi", num(hu_window.hi)},
      {"cutoff-male", num(cutoffs.male_cm2)},
      {"cutoff-female", num(cutoffs.female_cm2)},
      {"slice-policy", slice_policy.str()},
      {"format", output_format == OutputFormat::Csv ? "csv" : "json"},
      {"seed", std::to_string(seed)},
      {"muscle-lo", num(seg_params.muscle_window.lo)},
      {"muscle-hi", num(seg_params.muscle_window.hi)},
      {"body-threshold", num(seg_params.body_threshold_hu)},
      {"opening-radius", std::to_string(seg_params.opening_radius_px)},
      {"min-component-mm2", num(seg_params.min_component_mm2)},
      {"normalize", normalize ? "true" : "false"},
      {"augment", augment ? "true" : "false"},
      {"rotate-max-deg", num(augment_config.max_rotation_deg)},
      {"crop", std::to_string(augment_config.crop_x) + "x" + std::to_string(augment_config.crop_y)},
      {"std-divisor", "N"},
  };
}

}  // namespace sarco
