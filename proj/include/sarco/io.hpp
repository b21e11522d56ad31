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

#ifndef SARCO_IO_HPP
#define SARCO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sarco {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// True when the payload starts with the gzip magic 0x1F 0x8B.
bool is_gzip(std::span<const std::uint8_t> bytes);
Bytes gunzip(std::span<const std::uint8_t> bytes);
/// Produces a gzip stream with a zeroed timestamp, so equal input gives equal output.
Bytes gzip(std::span<const std::uint8_t> bytes);

}  // namespace sarco

#endif  // SARCO_IO_HPP
