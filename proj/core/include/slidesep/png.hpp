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

#ifndef SLIDESEP_PNG_HPP_
#define SLIDESEP_PNG_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "slidesep/postprocess.hpp"
#include "slidesep/raster.hpp"

namespace slidesep {

// Masks as 8-bit grayscale, 0 or 255.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);
// Any nonzero gray value reads as foreground.
BinaryMask read_mask_png(const std::filesystem::path& path);

// Labels as 16-bit grayscale. Throws std::out_of_range above 65535.
void write_labels_png(const std::filesystem::path& path, const LabelMap& labels);
// Accepts 8- or 16-bit grayscale.
LabelMap read_labels_png(const std::filesystem::path& path);

// Instances in distinct colours over a dark background, pen pixels in a
// fixed ink colour, and a white dot at every centroid.
void write_overlay_png(const std::filesystem::path& path, const Separation& separation);

}  // namespace slidesep

#endif  // SLIDESEP_PNG_HPP_
