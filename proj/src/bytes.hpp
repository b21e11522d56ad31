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

// Little-endian load/store helpers shared by the binary format readers.

#ifndef SARCO_SRC_BYTES_HPP
#define SARCO_SRC_BYTES_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <type_traits>
#include <vector>

namespace sarco::detail {

template <class T>
T load_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  static_assert(std::is_trivially_copyable_v<T>);
  using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
            std::conditional_t<sizeof(T) == 2, std::uint16_t,
            std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
  U u = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b)
    u |= static_cast<U>(static_cast<U>(bytes[offset + b]) << (8 * b));
  return std::bit_cast<T>(u);
}

template <class T>
void store_le(std::vector<std::uint8_t>& out, std::size_t offset, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
            std::conditional_t<sizeof(T) == 2, std::uint16_t,
            std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
  U u = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(T); ++b)
    out[offset + b] = static_cast<std::uint8_t>((u >> (8 * b)) & 0xFFu);
}

}  // namespace sarco::detail

#endif  // SARCO_SRC_BYTES_HPP
