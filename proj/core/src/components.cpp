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

#include "slidesep/components.hpp"

#include <vector>

namespace slidesep {

Components label_components(const BinaryMask& mask, Connectivity conn) {
  const int h = mask.height();
  const int w = mask.width();
  Components out{LabelMap(h, w, 0u), 0};
  const bool eight = conn == Connectivity::kEight;
  std::vector<int> stack;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!mask(x0, y0) || out.labels(x0, y0)) continue;
      const auto label = static_cast<std::uint32_t>(++out.count);
      out.labels(x0, y0) = label;
      stack.assign(1, y0 * w + x0);
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cx = cur % w;
        const int cy = cur / w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (!mask(nx, ny) || out.labels(nx, ny)) continue;
            out.labels(nx, ny) = label;
            stack.push_back(ny * w + nx);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace slidesep
