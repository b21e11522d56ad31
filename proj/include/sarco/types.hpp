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

#ifndef SARCO_TYPES_HPP
#define SARCO_TYPES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sarco {

using Vec3 = std::array<double, 3>;
using Dims = std::array<std::size_t, 3>;

/// 4x4 voxel-to-world transform. Maps homogeneous voxel index (i,j,k,1) to
/// physical (x,y,z,1) in millimetres. The last row is always (0,0,0,1).
class Affine {
 public:
  using Matrix = std::array<std::array<double, 4>, 4>;

  Affine();
  explicit Affine(const Matrix& m);

  static Affine diagonal(const Vec3& scale, const Vec3& translation = {0, 0, 0});

  double operator()(int row, int col) const { return m_[row][col]; }
  const Matrix& matrix() const { return m_; }

  Vec3 column(int c) const { return {m_[0][c], m_[1][c], m_[2][c]}; }
  void set_column(int c, const Vec3& v);
  Vec3 translation() const { return column(3); }
  void set_translation(const Vec3& t) { set_column(3, t); }

  Vec3 apply(double i, double j, double k) const;

  /// Determinant of the upper-left 3x3 block.
  double det3() const;

  /// Throws DegenerateAffine when |det3| < 1e-9 or any element is non-finite.
  void validate() const;

  bool approx_equal(const Affine& other, double tol) const;

 private:
  Matrix m_;
};

struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  double operator[](int axis) const { return axis == 0 ? sx : axis == 1 ? sy : sz; }
  void validate() const;
};

/// Anatomical direction of each volume axis, e.g. "RAS" or "LPI".
struct OrientationCode {
  std::array<char, 3> axes{'R', 'A', 'S'};

  static OrientationCode parse(std::string_view text);
  std::string str() const { return {axes[0], axes[1], axes[2]}; }
  void validate() const;

  friend bool operator==(const OrientationCode&, const OrientationCode&) = default;
};

template <class T>
struct Volume {
  Dims dims{0, 0, 0};
  std::vector<T> samples;
  Affine affine;
  std::string source_id;

  std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims[0] * (j + dims[1] * k);
  }
  T& at(std::size_t i, std::size_t j, std::size_t k) { return samples[index(i, j, k)]; }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    return samples[index(i, j, k)];
  }
};

/// Hounsfield-unit samples (or dimensionless values after normalization).
using CtVolume = Volume<float>;
/// Binary labels, each 0 or 1.
using MaskVolume = Volume<std::uint8_t>;

/// Throws InvalidArgument unless samples.size() matches dims and all dims > 0.
template <class T>
void check_shape(const Volume<T>& v);

/// Throws InvalidArgument on any non-finite sample.
void validate(const CtVolume& v);
/// Throws InvalidArgument on any label other than 0 or 1.
void validate(const MaskVolume& v);

/// Number of samples outside the physical CT range [-1024, 3071] HU.
std::size_t count_outside_hu_range(const CtVolume& v);

template <class T>
struct Grid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<T> data;

  Grid2D() = default;
  Grid2D(std::size_t w, std::size_t h, T fill = T{}) : nx(w), ny(h), data(w * h, fill) {}

  T& at(std::size_t i, std::size_t j) { return data[i + nx * j]; }
  const T& at(std::size_t i, std::size_t j) const { return data[i + nx * j]; }
};

using SliceImage = Grid2D<float>;
using MaskSlice = Grid2D<std::uint8_t>;

/// Extracts the 2-D slice at `index` along `axis`. The two remaining axes keep
/// their relative order.
template <class T>
Grid2D<T> extract_slice(const Volume<T>& v, int axis, std::size_t index);

/// Writes `slice` back into `v` at `index` along `axis`.
template <class T>
void insert_slice(Volume<T>& v, int axis, std::size_t index, const Grid2D<T>& slice);

}  // namespace sarco

#endif  // SARCO_TYPES_HPP
