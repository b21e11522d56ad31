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

#include "sarco/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sarco/error.hpp"

namespace sarco {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::UnsupportedDatatype: return "UnsupportedDatatype";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::NonFiniteAfterScaling: return "NonFiniteAfterScaling";
    case ErrorCode::DegenerateAffine: return "DegenerateAffine";
    case ErrorCode::DimsOverflow: return "DimsOverflow";
    case ErrorCode::MissingPreamble: return "MissingPreamble";
    case ErrorCode::CompressedTransferSyntax: return "CompressedTransferSyntax";
    case ErrorCode::MissingRequiredTag: return "MissingRequiredTag";
    case ErrorCode::PixelDataLengthMismatch: return "PixelDataLengthMismatch";
    case ErrorCode::MixedSeries: return "MixedSeries";
    case ErrorCode::NonUniformSliceSpacing: return "NonUniformSliceSpacing";
    case ErrorCode::DuplicatePosition: return "DuplicatePosition";
    case ErrorCode::InsufficientSlices: return "InsufficientSlices";
    case ErrorCode::NoInput: return "NoInput";
    case ErrorCode::AmbiguousOrientation: return "AmbiguousOrientation";
    case ErrorCode::TargetExceedsDims: return "TargetExceedsDims";
    case ErrorCode::TargetBelowDims: return "TargetBelowDims";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::MultipleAnnotatedSlices: return "MultipleAnnotatedSlices";
    case ErrorCode::GeometryMismatch: return "GeometryMismatch";
    case ErrorCode::EmptySlice: return "EmptySlice";
    case ErrorCode::DimsMismatch: return "DimsMismatch";
    case ErrorCode::NonPositiveGroundTruth: return "NonPositiveGroundTruth";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::SingleClassInput: return "SingleClassInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Affine::Affine() : m_{} {
  for (int d = 0; d < 4; ++d) m_[d][d] = 1.0;
}

Affine::Affine(const Matrix& m) : m_(m) { m_[3] = {0.0, 0.0, 0.0, 1.0}; }

Affine Affine::diagonal(const Vec3& scale, const Vec3& translation) {
  Affine a;
  for (int d = 0; d < 3; ++d) {
    a.m_[d][d] = scale[d];
    a.m_[d][3] = translation[d];
  }
  return a;
}

void Affine::set_column(int c, const Vec3& v) {
  for (int r = 0; r < 3; ++r) m_[r][c] = v[r];
}

Vec3 Affine::apply(double i, double j, double k) const {
  Vec3 out{};
  for (int r = 0; r < 3; ++r) out[r] = m_[r][0] * i + m_[r][1] * j + m_[r][2] * k + m_[r][3];
  return out;
}

double Affine::det3() const {
  return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
         m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
         m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
}

void Affine::validate() const {
  for (const auto& row : m_)
    for (double x : row)
      if (!std::isfinite(x)) throw Error(ErrorCode::DegenerateAffine, "non-finite affine element");
  if (std::abs(det3()) < 1e-9)
    throw Error(ErrorCode::DegenerateAffine, "3x3 block determinant is ~0");
}

bool Affine::approx_equal(const Affine& other, double tol) const {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (std::abs(m_[r][c] - other.m_[r][c]) > tol) return false;
  return true;
}

void Spacing::validate() const {
  for (double s : {sx, sy, sz})
    if (!(s > 0.0) || !std::isfinite(s))
      throw Error(ErrorCode::InvalidArgument, "spacing components must be positive and finite");
}

namespace {

int axis_group(char label) {
  switch (label) {
    case 'R': case 'L': return 0;
    case 'A': case 'P': return 1;
    case 'S': case 'I': return 2;
    default: return -1;
  }
}

}  // namespace

OrientationCode OrientationCode::parse(std::string_view text) {
  if (text.size() != 3) throw Error(ErrorCode::InvalidArgument, "orientation code must have 3 letters");
  OrientationCode code;
  for (int d = 0; d < 3; ++d)
    code.axes[d] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[d])));
  code.validate();
  return code;
}

void OrientationCode::validate() const {
  bool seen[3] = {false, false, false};
  for (char c : axes) {
    int g = axis_group(c);
    if (g < 0 || seen[g])
      throw Error(ErrorCode::InvalidArgument, "orientation '" + str() + "' must name R/L, A/P and S/I once each");
    seen[g] = true;
  }
}

template <class T>
void check_shape(const Volume<T>& v) {
  if (v.dims[0] == 0 || v.dims[1] == 0 || v.dims[2] == 0)
    throw Error(ErrorCode::InvalidArgument, "volume dims must be positive");
  if (v.samples.size() != v.size())
    throw Error(ErrorCode::InvalidArgument, "sample count does not match dims");
}

template void check_shape(const Volume<float>&);
template void check_shape(const Volume<std::uint8_t>&);

void validate(const CtVolume& v) {
  check_shape(v);
  v.affine.validate();
  for (float s : v.samples)
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "non-finite sample");
}

void validate(const MaskVolume& v) {
  check_shape(v);
  v.affine.validate();
  for (auto s : v.samples)
    if (s > 1) throw Error(ErrorCode::InvalidArgument, "mask label outside {0,1}");
}

std::size_t count_outside_hu_range(const CtVolume& v) {
  return static_cast<std::size_t>(std::count_if(v.samples.begin(), v.samples.end(),
                                                [](float s) { return s < -1024.0f || s > 3071.0f; }));
}

namespace {

// In-plane axes for a slice normal to `axis`, in increasing order.
std::pair<int, int> plane_axes(int axis) {
  switch (axis) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    case 2: return {0, 1};
    default: throw Error(ErrorCode::InvalidArgument, "slice axis must be 0, 1 or 2");
  }
}

}  // namespace

template <class T>
Grid2D<T> extract_slice(const Volume<T>& v, int axis, std::size_t index) {
  auto [u, w] = plane_axes(axis);
  if (index >= v.dims[axis]) throw Error(ErrorCode::InvalidArgument, "slice index out of range");
  Grid2D<T> out(v.dims[u], v.dims[w]);
  std::array<std::size_t, 3> idx{};
  idx[axis] = index;
  for (std::size_t b = 0; b < out.ny; ++b) {
    idx[w] = b;
    for (std::size_t a = 0; a < out.nx; ++a) {
      idx[u] = a;
      out.at(a, b) = v.at(idx[0], idx[1], idx[2]);
    }
  }
  return out;
}

template <class T>
void insert_slice(Volume<T>& v, int axis, std::size_t index, const Grid2D<T>& slice) {
  auto [u, w] = plane_axes(axis);
  if (index >= v.dims[axis]) throw Error(ErrorCode::InvalidArgument, "slice index out of range");
  if (slice.nx != v.dims[u] || slice.ny != v.dims[w])
    throw Error(ErrorCode::DimsMismatch, "slice extent does not match volume");
  std::array<std::size_t, 3> idx{};
  idx[axis] = index;
  for (std::size_t b = 0; b < slice.ny; ++b) {
    idx[w] = b;
    for (std::size_t a = 0; a < slice.nx; ++a) {
      idx[u] = a;
      v.at(idx[0], idx[1], idx[2]) = slice.at(a, b);
    }
  }
}

template Grid2D<float> extract_slice(const Volume<float>&, int, std::size_t);
template Grid2D<std::uint8_t> extract_slice(const Volume<std::uint8_t>&, int, std::size_t);
template void insert_slice(Volume<float>&, int, std::size_t, const Grid2D<float>&);
template void insert_slice(Volume<std::uint8_t>&, int, std::size_t, const Grid2D<std::uint8_t>&);

}  // namespace sarco
