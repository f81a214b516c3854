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

#include "slidesep/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slidesep/npy.hpp"
#include "slidesep/png.hpp"
#include "slidesep/rng.hpp"

namespace slidesep {
namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scene_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%04zu", index);
  return buf;
}

std::uint64_t scene_seed(std::uint64_t master_seed, std::size_t index) {
  return splitmix64(master_seed ^ splitmix64(index + 1));
}

void write_bundle(const fs::path& dir, const PredictionBundle& bundle) {
  fs::create_directories(dir);
  write_scalar_map(dir / files::kTissueProb, bundle.tissue_prob);
  write_scalar_map(dir / files::kPenProb, bundle.pen_prob);
  write_scalar_map(dir / files::kHDist, bundle.h_dist);
  write_scalar_map(dir / files::kVDist, bundle.v_dist);
}

PredictionBundle read_bundle(const fs::path& dir) {
  return {read_scalar_map(dir / files::kTissueProb), read_scalar_map(dir / files::kPenProb),
          read_scalar_map(dir / files::kHDist), read_scalar_map(dir / files::kVDist)};
}

void write_scene(const fs::path& dir, const SyntheticScene& scene,
                 const PredictionBundle& bundle) {
  write_bundle(dir, bundle);
  write_labels_png(dir / files::kGtLabels, scene.gt_instances);
  write_mask_png(dir / files::kGtPen, scene.pen);
  write_text(dir / files::kGtCentroids, centroids_to_json(scene.centroids));
}

LabelledBundle read_scene(const fs::path& dir) {
  return {dir.filename().string(), read_bundle(dir), read_labels_png(dir / files::kGtLabels),
          read_mask_png(dir / files::kGtPen)};
}

std::vector<std::string> list_bundle_dirs(const fs::path& root) {
  std::vector<std::string> names;
  for (const fs::directory_entry& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / files::kTissueProb)) {
      names.push_back(e.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string centroids_to_json(const std::vector<Centroid>& centroids) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Centroid& c : centroids) arr.push_back({{"x", c.x}, {"y", c.y}});
  return arr.dump(2) + "\n";
}

std::vector<Centroid> centroids_from_json(const std::string& text) {
  std::vector<Centroid> out;
  for (const auto& j : nlohmann::json::parse(text)) {
    out.push_back({j.at("x").get<double>(), j.at("y").get<double>()});
  }
  return out;
}

void write_prediction(const fs::path& dir, const Separation& sep,
                      const std::string& report_json, bool overlay) {
  fs::create_directories(dir);
  write_labels_png(dir / files::kInstancesPng, sep.instances);
  write_labels(dir / files::kInstancesNpy, sep.instances);
  write_mask_png(dir / files::kTissueMaskPng, sep.tissue);
  write_mask(dir / files::kTissueMaskNpy, sep.tissue);
  write_mask_png(dir / files::kPenMaskPng, sep.pen);
  write_mask(dir / files::kPenMaskNpy, sep.pen);
  write_text(dir / files::kCentroids, centroids_to_json(sep.centroids));
  write_text(dir / files::kReport, report_json);
  if (overlay) write_overlay_png(dir / files::kOverlay, sep);
}

}  // namespace slidesep
