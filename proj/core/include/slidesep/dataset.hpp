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

// On-disk layout shared by the synth, postprocess, eval and grid commands.
//
// Dataset root:
//   manifest.json               {"scenes": [{"name", "seed", "gt_count",
//                                 "height", "width"}, ...], ...}
//   <name>/tissue_prob.npy      <f4 probability maps and distance maps: the
//   <name>/pen_prob.npy         input bundle of the post-processing
//   <name>/h_dist.npy
//   <name>/v_dist.npy
//   <name>/gt_labels.png        16-bit instance labels
//   <name>/gt_pen.png           8-bit pen mask
//   <name>/gt_centroids.json    [{"x": .., "y": ..}, ...] in label order
//
// Prediction directory (one per image):
//   instances.png, instances.npy, tissue_mask.png, tissue_mask.npy,
//   pen_mask.png, pen_mask.npy, centroids.json, report.json, [overlay.png]

#ifndef SLIDESEP_DATASET_HPP_
#define SLIDESEP_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "slidesep/postprocess.hpp"
#include "slidesep/raster.hpp"
#include "slidesep/synth.hpp"

namespace slidesep {

namespace files {
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kTissueProb = "tissue_prob.npy";
inline constexpr const char* kPenProb = "pen_prob.npy";
inline constexpr const char* kHDist = "h_dist.npy";
inline constexpr const char* kVDist = "v_dist.npy";
inline constexpr const char* kGtLabels = "gt_labels.png";
inline constexpr const char* kGtPen = "gt_pen.png";
inline constexpr const char* kGtCentroids = "gt_centroids.json";
inline constexpr const char* kInstancesPng = "instances.png";
inline constexpr const char* kInstancesNpy = "instances.npy";
inline constexpr const char* kTissueMaskPng = "tissue_mask.png";
inline constexpr const char* kTissueMaskNpy = "tissue_mask.npy";
inline constexpr const char* kPenMaskPng = "pen_mask.png";
inline constexpr const char* kPenMaskNpy = "pen_mask.npy";
inline constexpr const char* kCentroids = "centroids.json";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kOverlay = "overlay.png";
}  // namespace files

struct SceneRecord {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t gt_count = 0;
  int height = 0;
  int width = 0;
};

struct LabelledBundle {
  std::string name;
  PredictionBundle bundle;
  LabelMap gt_instances;
  BinaryMask gt_pen;
};

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string scene_name(std::size_t index);

// Seed of scene `index` in a dataset generated from `master_seed`.
std::uint64_t scene_seed(std::uint64_t master_seed, std::size_t index);

void write_bundle(const std::filesystem::path& dir, const PredictionBundle& bundle);
PredictionBundle read_bundle(const std::filesystem::path& dir);

void write_scene(const std::filesystem::path& dir, const SyntheticScene& scene,
                 const PredictionBundle& bundle);
LabelledBundle read_scene(const std::filesystem::path& dir);

// Subdirectories of `root` holding tissue_prob.npy, sorted by name.
std::vector<std::string> list_bundle_dirs(const std::filesystem::path& root);

std::string centroids_to_json(const std::vector<Centroid>& centroids);
std::vector<Centroid> centroids_from_json(const std::string& text);

// Writes every prediction file for one image; overlay only if requested.
void write_prediction(const std::filesystem::path& dir, const Separation& sep,
                      const std::string& report_json, bool overlay);

}  // namespace slidesep

#endif  // SLIDESEP_DATASET_HPP_
