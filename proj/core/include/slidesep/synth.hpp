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

// Synthetic slides with exact ground truth.
//
// A cross-section is a union of one to three overlapping ellipses. It may be
// cut into fragments by parallel straight bands, and it may be placed so that
// it touches the previously placed section. Ground-truth centroids are mass
// centroids over all fragments of a section, and the distance maps point
// every pixel at its own section's centroid.
//
// All randomness comes from slidesep::Rng (std::mt19937_64 seeded through
// SplitMix64), so a scene is a pure function of its parameters.

#ifndef SLIDESEP_SYNTH_HPP_
#define SLIDESEP_SYNTH_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "slidesep/losses.hpp"
#include "slidesep/postprocess.hpp"
#include "slidesep/raster.hpp"

namespace slidesep {

struct SceneParams {
  int height = 1024;
  int width = 1024;
  int n_sections = 3;
  double size_min = 80.0;  // semi-major axis range of the main ellipse, pixels
  double size_max = 160.0;
  double fragmentation_prob = 0.5;
  int max_fragments = 3;
  double adjacency_prob = 0.3;
  int n_pen_strokes = 0;
  // Lower bound on the distance between any two section centroids.
  double min_separation = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct PenStroke {
  std::vector<Centroid> vertices;  // polyline, pixel coordinates
  double radius = 2.0;             // half thickness
};

struct SyntheticScene {
  LabelMap gt_instances;
  BinaryMask tissue;
  BinaryMask pen;
  std::vector<Centroid> centroids;  // centroids[i] is the mass centroid of label i + 1
  ScalarMap gt_h_dist;              // x - c_x on tissue, 0 elsewhere
  ScalarMap gt_v_dist;              // y - c_y on tissue, 0 elsewhere
  std::vector<PenStroke> pen_strokes;
  // Label pairs placed to touch each other.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacent_pairs;

  std::size_t section_count() const { return centroids.size(); }
};

struct NoiseParams {
  double dist_noise_sigma = 0.0;  // pixels, i.i.d. Gaussian on both distance maps
  double mask_flip_prob = 0.0;    // per-pixel flip before blurring
  double boundary_jitter = 0.0;   // masks dilated or eroded by up to this many pixels
  double prob_blur_sigma = 0.0;   // Gaussian blur of the probability maps, pixels
  std::uint64_t seed = 0;

  void Validate() const;
};

// Throws GenerationError when the sections do not fit within the retry budget.
SyntheticScene generate_scene(const SceneParams& params);

// Adds n random thick polylines to the pen mask. Tissue is untouched.
SyntheticScene render_pen_strokes(SyntheticScene scene, int n, std::uint64_t seed);

// Adds one given stroke to the pen mask.
SyntheticScene add_pen_stroke(SyntheticScene scene, const PenStroke& stroke);

BinaryMask rasterize_stroke(const PenStroke& stroke, int height, int width);

// Emulates imperfect network output for a scene.
PredictionBundle corrupt(const SyntheticScene& scene, const NoiseParams& noise);

// Exact bundle: masks as 0/1 probabilities and ground-truth distances.
PredictionBundle exact_bundle(const SyntheticScene& scene);

GroundTruth ground_truth(const SyntheticScene& scene);

// Distance maps pointing each labelled pixel at centroids[label - 1].
std::pair<ScalarMap, ScalarMap> distance_maps(const LabelMap& labels,
                                              const std::vector<Centroid>& centroids);

// Mass centroid of every label 1..max.
std::vector<Centroid> label_centroids(const LabelMap& labels);

}  // namespace slidesep

#endif  // SLIDESEP_SYNTH_HPP_
