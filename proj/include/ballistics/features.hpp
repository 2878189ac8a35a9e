// Copyright 2026 The Image Ballistics Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BALLISTICS_FEATURES_HPP_
#define BALLISTICS_FEATURES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "ballistics/errors.hpp"
#include "ballistics/exif_reader.hpp"
#include "ballistics/jpeg_structure.hpp"

namespace ballistics {

inline constexpr std::size_t kLuminanceFeatures = 32;
inline constexpr std::size_t kChrominanceFeatures = 8;
inline constexpr std::size_t kFeatureDims = 4 + kLuminanceFeatures +
                                            kChrominanceFeatures;  // 44

// The 44-dimensional numeric representation of one JPEG: width, height, EXIF
// entry count, structural marker count, the first 32 luminance and first 8
// chrominance quantization coefficients in storage (zigzag) order.
struct FeatureVector {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t exif_count = 0;
  std::uint32_t marker_count = 0;
  std::array<std::uint16_t, kLuminanceFeatures> luminance{};
  std::array<std::uint16_t, kChrominanceFeatures> chrominance{};

  bool operator==(const FeatureVector&) const = default;
};

struct FileIdentity {
  std::string filename;
  std::uint64_t byte_size = 0;
};

using FlatFeatures = std::array<double, kFeatureDims>;

inline FeatureVector build_feature_vector(const JpegStructure& structure,
                                          const ExifMap& exif) {
  FeatureVector v;
  v.width = structure.width;
  v.height = structure.height;
  v.exif_count = static_cast<std::uint32_t>(count_entries(exif));
  v.marker_count =
      static_cast<std::uint32_t>(count_structural_markers(structure.segments));
  for (std::size_t j = 0; j < kLuminanceFeatures; ++j) {
    v.luminance[j] = structure.luminance_table.coefficients[j];
  }
  if (structure.chrominance_table) {
    for (std::size_t k = 0; k < kChrominanceFeatures; ++k) {
      v.chrominance[k] = structure.chrominance_table->coefficients[k];
    }
  }
  return v;
}

// Fixed serialization order: w, h, exif_count, marker_count, l0..l31, c0..c7.
inline FlatFeatures vector_flatten(const FeatureVector& v) {
  FlatFeatures flat{};
  flat[0] = v.width;
  flat[1] = v.height;
  flat[2] = v.exif_count;
  flat[3] = v.marker_count;
  for (std::size_t j = 0; j < kLuminanceFeatures; ++j) {
    flat[4 + j] = v.luminance[j];
  }
  for (std::size_t k = 0; k < kChrominanceFeatures; ++k) {
    flat[4 + kLuminanceFeatures + k] = v.chrominance[k];
  }
  return flat;
}

// Inverse of vector_flatten; rejects sequences that cannot have come from a
// valid FeatureVector.
inline FeatureVector vector_unflatten(const FlatFeatures& flat) {
  const auto as_integer = [](double value, double max, const char* what) {
    if (!(value >= 0) || value > max || std::floor(value) != value) {
      throw FormatError(std::string("feature out of range: ") + what);
    }
    return value;
  };
  FeatureVector v;
  v.width = static_cast<std::uint32_t>(as_integer(flat[0], 4294967295.0, "w"));
  v.height = static_cast<std::uint32_t>(as_integer(flat[1], 4294967295.0, "h"));
  v.exif_count =
      static_cast<std::uint32_t>(as_integer(flat[2], 4294967295.0, "exif"));
  v.marker_count =
      static_cast<std::uint32_t>(as_integer(flat[3], 4294967295.0, "markers"));
  for (std::size_t j = 0; j < kLuminanceFeatures; ++j) {
    v.luminance[j] = static_cast<std::uint16_t>(
        as_integer(flat[4 + j], 65535.0, "luminance"));
    if (v.luminance[j] == 0) {
      throw FormatError("luminance coefficient must be >= 1");
    }
  }
  for (std::size_t k = 0; k < kChrominanceFeatures; ++k) {
    v.chrominance[k] = static_cast<std::uint16_t>(
        as_integer(flat[4 + kLuminanceFeatures + k], 65535.0, "chrominance"));
  }
  return v;
}

}  // namespace ballistics

#endif  // BALLISTICS_FEATURES_HPP_
