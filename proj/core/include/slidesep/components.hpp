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

#ifndef SLIDESEP_COMPONENTS_HPP_
#define SLIDESEP_COMPONENTS_HPP_

#include <cstddef>

#include "slidesep/raster.hpp"

namespace slidesep {

enum class Connectivity { kFour = 4, kEight = 8 };

struct Components {
  LabelMap labels;  // 0 background, 1..count in raster scan order of first pixel
  std::size_t count = 0;
};

Components label_components(const BinaryMask& mask, Connectivity conn);

}  // namespace slidesep

#endif  // SLIDESEP_COMPONENTS_HPP_
