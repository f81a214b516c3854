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

#include "slidesep/raster.hpp"

#include <algorithm>

namespace slidesep {

void PredictionBundle::Validate() const {
  RequireSameShape(tissue_prob, pen_prob, "pen_prob");
  RequireSameShape(tissue_prob, h_dist, "h_dist");
  RequireSameShape(tissue_prob, v_dist, "v_dist");
  auto in_unit = [](const ScalarMap& m) {
    return std::all_of(m.values().begin(), m.values().end(),
                       [](double v) { return v >= 0.0 && v <= 1.0; });
  };
  if (!in_unit(tissue_prob)) throw DimensionError("tissue_prob outside [0, 1]");
  if (!in_unit(pen_prob)) throw DimensionError("pen_prob outside [0, 1]");
}

CoordinateMaps coordinate_maps(int height, int width) {
  CoordinateMaps maps{ScalarMap(height, width), ScalarMap(height, width)};
  for (int y = 0; y < height; ++y) {
    auto h = maps.horizontal.row(y);
    auto v = maps.vertical.row(y);
    for (int x = 0; x < width; ++x) {
      h[x] = x;
      v[x] = y;
    }
  }
  return maps;
}

BinaryMask threshold(const ScalarMap& map, double t) {
  if (!std::isfinite(t)) throw PreconditionError("threshold must be finite");
  BinaryMask mask(map.height(), map.width());
  auto in = map.values();
  auto out = mask.values();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] >= t ? 1 : 0;
  return mask;
}

PaddedMap pad_to_multiple(const ScalarMap& map, int multiple) {
  if (multiple < 1) throw PreconditionError("padding multiple must be >= 1");
  const int h = (map.height() + multiple - 1) / multiple * multiple;
  const int w = (map.width() + multiple - 1) / multiple * multiple;
  PaddedMap out{ScalarMap(h, w, 0.0), {map.height(), map.width()}};
  for (int y = 0; y < map.height(); ++y) {
    auto src = map.row(y);
    std::copy(src.begin(), src.end(), out.map.row(y).begin());
  }
  return out;
}

ScalarMap crop_to(const ScalarMap& map, OriginalSize size) {
  if (size.height < 1 || size.width < 1 || size.height > map.height() ||
      size.width > map.width()) {
    throw DimensionError("crop size does not fit inside the map");
  }
  ScalarMap out(size.height, size.width);
  for (int y = 0; y < size.height; ++y) {
    auto src = map.row(y).first(size.width);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

std::size_t count_foreground(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(),
                    [](std::uint8_t b) { return b != 0; }));
}

}  // namespace slidesep
