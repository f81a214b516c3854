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

#ifndef SLIDESEP_FILTERS_HPP_
#define SLIDESEP_FILTERS_HPP_

#include <span>
#include <vector>

namespace slidesep {

enum class Border { kZero, kReplicate };

// Sampled Gaussian with radius ceil(4 sigma), normalized to unit sum.
// sigma == 0 gives the single tap {1}.
std::vector<double> gaussian_kernel(double sigma);

// In-place separable convolution of a row-major height x width buffer with
// the same odd-length symmetric kernel along both axes.
void convolve_separable(std::span<double> data, int height, int width,
                        std::span<const double> kernel, Border border);

// In-place separable max filter with a window x window box. Replicate
// borders, which is the same as clipping the box to the image.
void max_filter(std::span<double> data, int height, int width, int window);

}  // namespace slidesep

#endif  // SLIDESEP_FILTERS_HPP_
