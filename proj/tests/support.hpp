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

#ifndef SARCO_TESTS_SUPPORT_HPP
#define SARCO_TESTS_SUPPORT_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "json.hpp"
#include "sarco/error.hpp"
#include "sarco/types.hpp"

namespace sarco::test {

inline std::filesystem::path data_dir() { return SARCO_TEST_DATA; }

inline nlohmann::json load_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

/// Fresh empty directory under the system temp dir, unique per name.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("sarco_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Error code thrown by f, or Ok when it returns normally.
template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

inline Affine affine_from_json(const nlohmann::json& rows) {
  Affine::Matrix m{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = rows[r][c].get<double>();
  return Affine(m);
}

/// Signed permutation matrix scaled per axis, with a random translation.
inline Affine random_axis_affine(std::mt19937_64& rng) {
  std::array<int, 3> perm{0, 1, 2};
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> sp(0.25, 3.0);
  std::uniform_real_distribution<double> tr(-200.0, 200.0);
  std::bernoulli_distribution coin(0.5);
  Affine::Matrix m{};
  for (int c = 0; c < 3; ++c) m[perm[c]][c] = (coin(rng) ? -1.0 : 1.0) * sp(rng);
  for (int r = 0; r < 3; ++r) m[r][3] = tr(rng);
  m[3][3] = 1.0;
  return Affine(m);
}

inline Dims random_dims(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  std::uniform_int_distribution<std::size_t> d(lo, hi);
  return {d(rng), d(rng), d(rng)};
}

inline CtVolume random_ct(std::mt19937_64& rng, const Dims& dims, const Affine& affine) {
  CtVolume v;
  v.dims = dims;
  v.affine = affine;
  std::uniform_real_distribution<float> hu(-1024.0f, 3071.0f);
  v.samples.resize(v.size());
  for (float& s : v.samples) s = hu(rng);
  return v;
}

inline MaskVolume random_mask(std::mt19937_64& rng, const Dims& dims, const Affine& affine, double p = 0.4) {
  MaskVolume v;
  v.dims = dims;
  v.affine = affine;
  std::bernoulli_distribution on(p);
  v.samples.resize(v.size());
  for (auto& s : v.samples) s = on(rng) ? 1 : 0;
  return v;
}

}  // namespace sarco::test

#endif  // SARCO_TESTS_SUPPORT_HPP
