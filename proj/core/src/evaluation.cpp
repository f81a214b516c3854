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

#include "slidesep/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "slidesep/metrics.hpp"

namespace slidesep {
namespace {

using nlohmann::ordered_json;

template <typename T>
void PutOptional(ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v.has_value()) {
    j[key] = *v;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> GetOptional(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

ordered_json StatJson(const Stat& s) {
  return ordered_json{{"n", s.n}, {"mean", s.mean}, {"std", s.std}};
}

}  // namespace

Stat summarize(const std::vector<double>& values) {
  Stat s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.n));
  return s;
}

Aggregate aggregate_rows(const std::vector<ImageRow>& rows) {
  std::vector<double> dt, dp, ce, idice, ni, wt;
  for (const ImageRow& r : rows) {
    if (r.dice_tissue) dt.push_back(*r.dice_tissue);
    if (r.dice_pen && r.gt_has_pen.value_or(false)) dp.push_back(*r.dice_pen);
    if (r.count_error) ce.push_back(static_cast<double>(*r.count_error));
    if (r.instance_dice) idice.push_back(*r.instance_dice);
    ni.push_back(static_cast<double>(r.n_instances));
    wt.push_back(r.wall_time_ms);
  }
  return {summarize(dt), summarize(dp), summarize(ce),
          summarize(idice), summarize(ni), summarize(wt)};
}

RunReport make_report(std::vector<ImageRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ImageRow& a, const ImageRow& b) { return a.name < b.name; });
  RunReport r{std::move(rows), {}};
  r.aggregate = aggregate_rows(r.rows);
  return r;
}

void score_row(ImageRow& row, const LabelMap& pred_instances, const BinaryMask& pred_tissue,
               const BinaryMask& pred_pen, const LabelMap& gt_instances,
               const BinaryMask& gt_pen) {
  BinaryMask gt_tissue(gt_instances.height(), gt_instances.width(), 0);
  for (std::size_t i = 0; i < gt_instances.size(); ++i) gt_tissue[i] = gt_instances[i] != 0;
  const std::size_t gt_count = max_label(gt_instances);
  row.dice_tissue = dice_score(pred_tissue, gt_tissue);
  row.dice_pen = dice_score(pred_pen, gt_pen);
  row.gt_has_pen = count_foreground(gt_pen) > 0;
  row.gt_count = gt_count;
  row.count_error = count_error(pred_instances, gt_count);
  row.instance_dice = match_instances(pred_instances, gt_instances).mean_dice;
}

std::string report_to_json(const RunReport& report) {
  ordered_json rows = ordered_json::array();
  for (const ImageRow& r : report.rows) {
    ordered_json j;
    j["name"] = r.name;
    j["n_instances"] = r.n_instances;
    PutOptional(j, "gt_count", r.gt_count);
    PutOptional(j, "count_error", r.count_error);
    PutOptional(j, "dice_tissue", r.dice_tissue);
    PutOptional(j, "dice_pen", r.dice_pen);
    PutOptional(j, "gt_has_pen", r.gt_has_pen);
    PutOptional(j, "instance_dice", r.instance_dice);
    j["wall_time_ms"] = r.wall_time_ms;
    rows.push_back(std::move(j));
  }
  const Aggregate& a = report.aggregate;
  ordered_json agg{{"dice_tissue", StatJson(a.dice_tissue)},
                   {"dice_pen", StatJson(a.dice_pen)},
                   {"count_error", StatJson(a.count_error)},
                   {"instance_dice", StatJson(a.instance_dice)},
                   {"n_instances", StatJson(a.n_instances)},
                   {"wall_time_ms", StatJson(a.wall_time_ms)}};
  ordered_json root{{"images", std::move(rows)}, {"aggregate", std::move(agg)}};
  return root.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  const ordered_json root = ordered_json::parse(text);
  std::vector<ImageRow> rows;
  for (const ordered_json& j : root.at("images")) {
    ImageRow r;
    r.name = j.at("name").get<std::string>();
    r.n_instances = j.at("n_instances").get<std::size_t>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    r.gt_count = GetOptional<std::size_t>(j, "gt_count");
    r.count_error = GetOptional<std::size_t>(j, "count_error");
    r.dice_tissue = GetOptional<double>(j, "dice_tissue");
    r.dice_pen = GetOptional<double>(j, "dice_pen");
    r.gt_has_pen = GetOptional<bool>(j, "gt_has_pen");
    r.instance_dice = GetOptional<double>(j, "instance_dice");
    rows.push_back(std::move(r));
  }
  return make_report(std::move(rows));
}

}  // namespace slidesep
