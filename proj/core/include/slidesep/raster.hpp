// Copyright 2026 The slidesep Authors
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

#ifndef SLIDESEP_RASTER_HPP_
#define SLIDESEP_RASTER_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "slidesep/errors.hpp"

namespace slidesep {

// Pixel position. x is the column (grows rightward), y the row (grows
// downward); both are 0-based.
struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// Row-major single-channel raster. Element (x, y) lives at y * width + x.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(int height, int width, T fill = T{}) : height_(height), width_(width) {
    CheckDims(height, width);
    values_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  Raster(int height, int width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    CheckDims(height, width);
    if (values_.size() != static_cast<std::size_t>(height) * width) {
      throw DimensionError("raster payload has " +
                           std::to_string(values_.size()) +
                           " elements, expected " + std::to_string(height) +
                           "x" + std::to_string(width));
    }
    if constexpr (std::is_floating_point_v<T>) {
      for (T v : values_) {
        if (!std::isfinite(v)) throw DimensionError("raster value is not finite");
      }
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(int x, int y) { return values_[Index(x, y)]; }
  const T& operator()(int x, int y) const { return values_[Index(x, y)]; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  std::span<T> row(int y) {
    return std::span<T>(values_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const T> row(int y) const {
    return std::span<const T>(values_).subspan(static_cast<std::size_t>(y) * width_,
                                               width_);
  }

  bool contains(PixelCoord p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
  }

  template <typename U>
  bool same_shape(const Raster<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static void CheckDims(int height, int width) {
    if (height < 1 || width < 1) {
      throw DimensionError("raster dimensions must be >= 1, got " +
                           std::to_string(height) + "x" + std::to_string(width));
    }
  }

  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<T> values_;
};

// Probabilities, distances and coordinates. 64-bit internally.
using ScalarMap = Raster<double>;
// Foreground bits stored as 0/1 bytes.
using BinaryMask = Raster<std::uint8_t>;
// 0 is background, 1..C are instances.
using LabelMap = Raster<std::uint32_t>;

template <typename A, typename B>
void RequireSameShape(const Raster<A>& a, const Raster<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                         " vs " + std::to_string(b.height()) + "x" +
                         std::to_string(b.width()));
  }
}

// The four per-pixel model outputs.
struct PredictionBundle {
  ScalarMap tissue_prob;
  ScalarMap pen_prob;
  ScalarMap h_dist;
  ScalarMap v_dist;

  int height() const { return tissue_prob.height(); }
  int width() const { return tissue_prob.width(); }

  // Throws DimensionError unless all maps share dimensions and both
  // probability maps lie in [0, 1].
  void Validate() const;
};

struct CoordinateMaps {
  ScalarMap horizontal;  // value x at (x, y)
  ScalarMap vertical;    // value y at (x, y)
};

CoordinateMaps coordinate_maps(int height, int width);

// Bit set iff value >= t.
BinaryMask threshold(const ScalarMap& map, double t);

struct OriginalSize {
  int height = 0;
  int width = 0;
};

struct PaddedMap {
  ScalarMap map;
  OriginalSize original;
};

// Grows the map to the smallest multiples of `multiple` by appending zeros at
// the bottom and right. Existing pixel coordinates are unchanged.
PaddedMap pad_to_multiple(const ScalarMap& map, int multiple);

// Inverse of pad_to_multiple on the original region.
ScalarMap crop_to(const ScalarMap& map, OriginalSize size);

std::size_t count_foreground(const BinaryMask& mask);

}  // namespace slidesep

#endif  // SLIDESEP_RASTER_HPP_
