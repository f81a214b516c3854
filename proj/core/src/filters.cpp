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

#include "slidesep/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "slidesep/errors.hpp"

namespace slidesep {
namespace {

// One pass along rows (stride 1) or columns (stride width). `line` is the
// scratch copy of the current line.
void ConvolveLines(std::span<double> data, int lines, int length, std::size_t line_step,
                   std::size_t elem_step, std::span<const double> kernel, Border border) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> line(length);
  for (int l = 0; l < lines; ++l) {
    double* base = data.data() + l * line_step;
    for (int i = 0; i < length; ++i) line[i] = base[i * elem_step];
    for (int i = 0; i < length; ++i) {
      double acc = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        int j = i + t;
        if (j < 0 || j >= length) {
          if (border == Border::kZero) continue;
          j = std::clamp(j, 0, length - 1);
        }
        acc += kernel[t + radius] * line[j];
      }
      base[i * elem_step] = acc;
    }
  }
}

void MaxLines(std::span<double> data, int lines, int length, std::size_t line_step,
              std::size_t elem_step, int radius) {
  std::vector<double> line(length);
  for (int l = 0; l < lines; ++l) {
    double* base = data.data() + l * line_step;
    for (int i = 0; i < length; ++i) line[i] = base[i * elem_step];
    for (int i = 0; i < length; ++i) {
      const int lo = std::max(0, i - radius);
      const int hi = std::min(length - 1, i + radius);
      base[i * elem_step] = *std::max_element(line.begin() + lo, line.begin() + hi + 1);
    }
  }
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw PreconditionError("gaussian sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[i + radius] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;
  return kernel;
}

void convolve_separable(std::span<double> data, int height, int width,
                        std::span<const double> kernel, Border border) {
  if (kernel.size() % 2 == 0) throw PreconditionError("kernel length must be odd");
  if (kernel.size() == 1 && kernel[0] == 1.0) return;
  ConvolveLines(data, height, width, width, 1, kernel, border);
  ConvolveLines(data, width, height, 1, width, kernel, border);
}

void max_filter(std::span<double> data, int height, int width, int window) {
  if (window < 1 || window % 2 == 0) throw PreconditionError("max-filter window must be odd");
  const int radius = window / 2;
  if (radius == 0) return;
  MaxLines(data, height, width, width, 1, radius);
  MaxLines(data, width, height, 1, width, radius);
}

}  // namespace slidesep
