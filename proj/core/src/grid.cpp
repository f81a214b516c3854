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

#include "slidesep/grid.hpp"

#include <charconv>
#include <tuple>

#include "slidesep/metrics.hpp"
#include "slidesep/parallel.hpp"

namespace slidesep {
namespace {

std::string Num(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

// True if a should replace b as the best cell.
bool Better(const GridCell& a, const GridCell& b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  const auto key = [](const GridCell& c) {
    return std::make_tuple(c.config.sigma, c.config.window, -c.config.t_percentile, c.config.k);
  };
  return key(a) < key(b);
}

}  // namespace

GridObjective parse_objective(const std::string& name) {
  if (name == "count_accuracy") return GridObjective::kCountAccuracy;
  if (name == "mean_dice") return GridObjective::kMeanDice;
  throw PreconditionError("unknown objective '" + name + "' (count_accuracy, mean_dice)");
}

const char* objective_name(GridObjective objective) {
  return objective == GridObjective::kCountAccuracy ? "count_accuracy" : "mean_dice";
}

void GridSpec::Validate() const {
  if (sigmas.empty() || windows.empty() || percentiles.empty() || ks.empty()) {
    throw PreconditionError("every grid axis needs at least one value");
  }
  for (int s : windows) {
    if (s < 1 || s % 2 == 0) throw PreconditionError("grid windows must be odd and >= 1");
  }
  for (double s : sigmas) PostProcessConfig{20, s}.Validate();
  for (double p : percentiles) PostProcessConfig{20, 2.0, 15, p}.Validate();
  for (int k : ks) PostProcessConfig{k}.Validate();
}

std::size_t GridSpec::cell_count() const {
  return ks.size() * sigmas.size() * windows.size() * percentiles.size();
}

GridResult grid_search(const GridSpec& spec, const std::vector<LabelledBundle>& data,
                       int threads) {
  spec.Validate();
  if (data.empty()) throw PreconditionError("grid search needs at least one labelled scene");
  GridResult result;
  for (int k : spec.ks)
    for (double sigma : spec.sigmas)
      for (int window : spec.windows)
        for (double p : spec.percentiles)
          result.cells.push_back({PostProcessConfig{k, sigma, window, p, spec.prob_threshold}});

  parallel_for(result.cells.size(), threads, [&](std::size_t i) {
    GridCell& cell = result.cells[i];
    std::size_t exact = 0;
    double err_sum = 0.0, dice_sum = 0.0;
    for (const LabelledBundle& item : data) {
      const Separation sep = separate(item.bundle, cell.config);
      const std::size_t err = count_error(sep.instances, max_label(item.gt_instances));
      exact += err == 0;
      err_sum += static_cast<double>(err);
      dice_sum += match_instances(sep.instances, item.gt_instances).mean_dice;
    }
    const auto n = static_cast<double>(data.size());
    cell.count_accuracy = static_cast<double>(exact) / n;
    cell.mean_count_error = err_sum / n;
    cell.mean_dice = dice_sum / n;
    cell.objective =
        spec.objective == GridObjective::kCountAccuracy ? cell.count_accuracy : cell.mean_dice;
  });

  result.best = result.cells.front();
  for (const GridCell& c : result.cells) {
    if (Better(c, result.best)) result.best = c;
  }
  return result;
}

std::string grid_to_csv(const GridResult& result) {
  std::string out =
      "k,sigma,window,percentile,prob_threshold,count_accuracy,mean_count_error,mean_dice,"
      "objective\n";
  for (const GridCell& c : result.cells) {
    out += std::to_string(c.config.k) + "," + Num(c.config.sigma) + "," +
           std::to_string(c.config.window) + "," + Num(c.config.t_percentile) + "," +
           Num(c.config.prob_threshold) + "," + Num(c.count_accuracy) + "," +
           Num(c.mean_count_error) + "," + Num(c.mean_dice) + "," + Num(c.objective) + "\n";
  }
  return out;
}

}  // namespace slidesep
