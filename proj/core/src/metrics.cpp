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

#include "slidesep/metrics.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

namespace slidesep {

double dice_score(const BinaryMask& pred, const BinaryMask& gt) {
  RequireSameShape(pred, gt, "dice_score");
  std::size_t inter = 0, np = 0, ng = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    inter += p && g;
    np += p;
    ng += g;
  }
  if (np + ng == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(np + ng);
}

std::uint32_t max_label(const LabelMap& labels) {
  if (labels.empty()) return 0;
  return *std::max_element(labels.values().begin(), labels.values().end());
}

std::size_t count_error(const LabelMap& pred, std::size_t gt_count) {
  const std::size_t n = max_label(pred);
  return n > gt_count ? n - gt_count : gt_count - n;
}

InstanceAgreement match_instances(const LabelMap& pred, const LabelMap& gt) {
  RequireSameShape(pred, gt, "match_instances");
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> overlap;
  std::map<std::uint32_t, std::size_t> pred_area, gt_area;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::uint32_t p = pred[i];
    const std::uint32_t g = gt[i];
    if (p) ++pred_area[p];
    if (g) ++gt_area[g];
    if (p && g) ++overlap[{p, g}];
  }

  std::vector<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(overlap.size());
  for (const auto& [key, n] : overlap) pairs.emplace_back(n, key.second, key.first);
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });

  InstanceAgreement out;
  out.pred_count = pred_area.size();
  out.gt_count = gt_area.size();
  std::map<std::uint32_t, bool> pred_taken, gt_taken;
  double dice_sum = 0.0;
  for (const auto& [n, g, p] : pairs) {
    if (pred_taken[p] || gt_taken[g]) continue;
    pred_taken[p] = gt_taken[g] = true;
    const double d = 2.0 * static_cast<double>(n) /
                     static_cast<double>(pred_area[p] + gt_area[g]);
    out.matches.push_back({p, g, n, d});
    dice_sum += d;
  }
  const std::size_t denom = std::max(out.pred_count, out.gt_count);
  out.mean_dice = denom == 0 ? 1.0 : dice_sum / static_cast<double>(denom);
  return out;
}

}  // namespace slidesep
