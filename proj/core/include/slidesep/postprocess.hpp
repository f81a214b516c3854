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

// Cross-section separation from distance-to-centroid predictions.
//
// Every tissue pixel votes for the centroid it predicts (its coordinate minus
// its predicted offset). Votes are binned into a coarse 2D histogram, the
// histogram is smoothed with a Gaussian, and local maxima that survive a
// percentile threshold become instance centroids. Each tissue pixel is then
// labelled with the centroid nearest to its own vote. Fragments of one
// section vote for the same place and are joined; touching sections vote for
// different places and are split.

#ifndef SLIDESEP_POSTPROCESS_HPP_
#define SLIDESEP_POSTPROCESS_HPP_

#include <cstddef>
#include <vector>

#include "slidesep/raster.hpp"

namespace slidesep {

struct PostProcessConfig {
  int k = 20;                   // image pixels per histogram bin side
  double sigma = 2.0;           // Gaussian std, in bins
  int window = 15;              // max-filter side, in bins (odd)
  double t_percentile = 98.0;   // percentile of smoothed bin values
  double prob_threshold = 0.5;  // sigmoid output -> mask

  void Validate() const;
};

// Per-pixel predicted centroid. Background pixels hold 0 in cx and cy.
struct CentroidMap {
  ScalarMap cx;
  ScalarMap cy;
  BinaryMask mask;
};

struct Histogram2D {
  int bin_h = 0;
  int bin_w = 0;
  int k = 1;
  // Dimensions of the image the votes came from.
  int source_h = 0;
  int source_w = 0;
  std::vector<double> counts;  // row-major, bin_h * bin_w

  double& at(int row, int col) { return counts[static_cast<std::size_t>(row) * bin_w + col]; }
  double at(int row, int col) const {
    return counts[static_cast<std::size_t>(row) * bin_w + col];
  }
  double total() const;
};

struct Centroid {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Centroid&, const Centroid&) = default;
};

// Sorted ascending by (y, x), no duplicates.
using CentroidSet = std::vector<Centroid>;

CentroidMap build_centroid_map(const BinaryMask& tissue, const ScalarMap& h_dist,
                               const ScalarMap& v_dist);

// Votes are clamped into [0, dim - 1] before binning, so the total count
// always equals the number of foreground pixels.
Histogram2D build_histogram(const CentroidMap& cmap, int k);

// Separable Gaussian, kernel radius ceil(4 sigma), unit sum, zero padding.
Histogram2D smooth_histogram(const Histogram2D& hist, double sigma);

// Linear-interpolation percentile (the numpy default) over all values.
double percentile(std::vector<double> values, double p);

// Non-maximum suppression: a bin survives if it equals the window x window
// maximum around it (replicate border) and is strictly above the
// t_percentile-th percentile of all bins. 8-connected plateaus of equal
// surviving bins collapse to their mean position. Bin positions map to the
// pixel at the bin centre, clamped to the image.
CentroidSet find_centroids(const Histogram2D& hist, int window, double t_percentile);

// Converts a (possibly fractional) bin position to pixel coordinates.
Centroid bin_to_pixel(const Histogram2D& hist, double row, double col);

// Label of each foreground pixel is 1 + index of the centroid nearest to its
// vote; ties go to the lower index. Throws PreconditionError if `centroids`
// is empty while the mask has foreground.
LabelMap assign_instances(const CentroidMap& cmap, const CentroidSet& centroids);

struct Separation {
  BinaryMask tissue;
  BinaryMask pen;
  LabelMap instances;
  CentroidSet centroids;  // centroids[i] belongs to label i + 1

  std::size_t instance_count() const { return centroids.size(); }
};

// The full pipeline. If non-maximum suppression finds nothing but tissue is
// present, the global maximum of the smoothed histogram is used as the only
// centroid. Centroids that win no pixel are dropped and labels renumbered so
// that every label in 1..C is used.
Separation separate(const PredictionBundle& bundle, const PostProcessConfig& cfg);

}  // namespace slidesep

#endif  // SLIDESEP_POSTPROCESS_HPP_
