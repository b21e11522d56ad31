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

#ifndef SARCO_CONFIG_HPP
#define SARCO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sarco/preprocess.hpp"
#include "sarco/segment.hpp"
#include "sarco/sma.hpp"
#include "sarco/types.hpp"

namespace sarco {

enum class OutputFormat { Csv, Json };

/// Every knob of a run. Keys accepted by set() match the CLI flag names
/// without the leading dashes; entries() lists them in a fixed order and is
/// embedded in every report.
struct RunConfig {
  OrientationCode target_orientation;  // RAS
  Spacing target_spacing{1.0, 1.0, 1.0};
  HuWindow hu_window;
  Cutoffs cutoffs;
  SlicePolicy slice_policy;
  SegParams seg_params;
  OutputFormat output_format = OutputFormat::Csv;
  std::uint64_t seed = 0;

  bool normalize = true;
  bool augment = false;
  AugmentConfig augment_config;

  /// Throws ConfigError for unknown keys or unparseable values.
  void set(std::string_view key, std::string_view value);
  /// Flat "key=value" lines; '#' starts a comment; blank lines ignored.
  void load_text(std::string_view text);
  void load_file(const std::filesystem::path& path);
  void validate() const;

  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

}  // namespace sarco

#endif  // SARCO_CONFIG_HPP
