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

#ifndef SLIDESEP_EVALUATION_HPP_
#define SLIDESEP_EVALUATION_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slidesep/raster.hpp"

namespace slidesep {

struct ImageRow {
  std::string name;
  std::size_t n_instances = 0;
  double wall_time_ms = 0.0;
  // Present only when ground truth was available.
  std::optional<double> dice_tissue;
  std::optional<double> dice_pen;
  std::optional<bool> gt_has_pen;
  std::optional<std::size_t> gt_count;
  std::optional<std::size_t> count_error;
  std::optional<double> instance_dice;
};

struct Stat {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation

  friend bool operator==(const Stat&, const Stat&) = default;
};

struct Aggregate {
  Stat dice_tissue;
  Stat dice_pen;  // over rows whose ground truth contains pen
  Stat count_error;
  Stat instance_dice;
  Stat n_instances;
  Stat wall_time_ms;
};

struct RunReport {
  std::vector<ImageRow> rows;  // sorted by name
  Aggregate aggregate;
};

Stat summarize(const std::vector<double>& values);

// Recomputes the aggregate block from the rows.
Aggregate aggregate_rows(const std::vector<ImageRow>& rows);

RunReport make_report(std::vector<ImageRow> rows);

// Fills the ground-truth dependent fields of a row.
void score_row(ImageRow& row, const LabelMap& pred_instances, const BinaryMask& pred_tissue,
               const BinaryMask& pred_pen, const LabelMap& gt_instances,
               const BinaryMask& gt_pen);

// JSON with two-space indentation and a trailing newline. Doubles use the
// shortest round-trip representation, so the text is deterministic.
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

}  // namespace slidesep

#endif  // SLIDESEP_EVALUATION_HPP_
