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

#ifndef SLIDESEP_METRICS_HPP_
#define SLIDESEP_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slidesep/raster.hpp"

namespace slidesep {

// 2|P & G| / (|P| + |G|); 1.0 when both are empty.
double dice_score(const BinaryMask& pred, const BinaryMask& gt);

std::uint32_t max_label(const LabelMap& labels);

// |max label - gt_count|.
std::size_t count_error(const LabelMap& pred, std::size_t gt_count);

struct InstanceMatch {
  std::uint32_t pred_label = 0;
  std::uint32_t gt_label = 0;
  std::size_t overlap = 0;
  double dice = 0.0;
};

struct InstanceAgreement {
  std::vector<InstanceMatch> matches;  // one-to-one, greedy by overlap
  std::size_t pred_count = 0;
  std::size_t gt_count = 0;
  // Sum of matched Dice over max(pred_count, gt_count); unmatched instances
  // count as 0. 1.0 iff the label maps agree up to a permutation.
  double mean_dice = 0.0;
};

// Pairs predicted and ground-truth instances one-to-one, greedily taking the
// largest remaining overlap first (ties: lower gt label, then lower pred
// label).
InstanceAgreement match_instances(const LabelMap& pred, const LabelMap& gt);

}  // namespace slidesep

#endif  // SLIDESEP_METRICS_HPP_
