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

#ifndef SLIDESEP_GRID_HPP_
#define SLIDESEP_GRID_HPP_

#include <string>
#include <vector>

#include "slidesep/dataset.hpp"
#include "slidesep/postprocess.hpp"

namespace slidesep {

enum class GridObjective {
  kCountAccuracy,  // fraction of images with the exact section count
  kMeanDice,       // mean per-image instance Dice (up to label permutation)
};

GridObjective parse_objective(const std::string& name);
const char* objective_name(GridObjective objective);

struct GridSpec {
  std::vector<double> sigmas{1.0, 2.0, 3.0};
  std::vector<int> windows{11, 15, 19};
  std::vector<double> percentiles{95.0, 98.0, 99.0};
  std::vector<int> ks{20};
  double prob_threshold = 0.5;
  GridObjective objective = GridObjective::kCountAccuracy;

  void Validate() const;
  std::size_t cell_count() const;
};

struct GridCell {
  PostProcessConfig config;
  double count_accuracy = 0.0;
  double mean_count_error = 0.0;
  double mean_dice = 0.0;
  double objective = 0.0;
};

struct GridResult {
  std::vector<GridCell> cells;  // Cartesian order: k, sigma, window, percentile
  GridCell best;
};

// Exhaustive search. Ties on the objective go to the smaller sigma, then the
// smaller window, then the larger percentile, then the smaller k.
GridResult grid_search(const GridSpec& spec, const std::vector<LabelledBundle>& data,
                       int threads = 1);

// Header plus one row per cell, in Cartesian order.
std::string grid_to_csv(const GridResult& result);

}  // namespace slidesep

#endif  // SLIDESEP_GRID_HPP_
