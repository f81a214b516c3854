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

#include "slidesep/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "slidesep/filters.hpp"

namespace slidesep {

void PostProcessConfig::Validate() const {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw PreconditionError("sigma must be >= 0");
  if (window < 1 || window % 2 == 0) {
    throw PreconditionError("window must be odd and >= 1, got " + std::to_string(window));
  }
  if (!(t_percentile >= 0.0 && t_percentile <= 100.0)) {
    throw PreconditionError("t_percentile must lie in [0, 100]");
  }
  if (!std::isfinite(prob_threshold)) throw PreconditionError("prob_threshold must be finite");
}

double Histogram2D::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

CentroidMap build_centroid_map(const BinaryMask& tissue, const ScalarMap& h_dist,
                               const ScalarMap& v_dist) {
  RequireSameShape(tissue, h_dist, "build_centroid_map h_dist");
  RequireSameShape(tissue, v_dist, "build_centroid_map v_dist");
  const int h = tissue.height();
  const int w = tissue.width();
  CentroidMap cmap{ScalarMap(h, w, 0.0), ScalarMap(h, w, 0.0), tissue};
  for (int y = 0; y < h; ++y) {
    auto m = tissue.row(y);
    auto dh = h_dist.row(y);
    auto dv = v_dist.row(y);
    auto cx = cmap.cx.row(y);
    auto cy = cmap.cy.row(y);
    for (int x = 0; x < w; ++x) {
      if (!m[x]) continue;
      cx[x] = x - dh[x];
      cy[x] = y - dv[x];
    }
  }
  return cmap;
}

namespace {

// Shared by the public building blocks and the fused path in separate().
// vote(x, y) returns the predicted centroid of foreground pixel (x, y).
template <typename Vote>
Histogram2D HistogramFrom(const BinaryMask& mask, int k, Vote vote) {
  const int h = mask.height();
  const int w = mask.width();
  Histogram2D hist;
  hist.k = k;
  hist.source_h = h;
  hist.source_w = w;
  hist.bin_h = (h + k - 1) / k;
  hist.bin_w = (w + k - 1) / k;
  hist.counts.assign(static_cast<std::size_t>(hist.bin_h) * hist.bin_w, 0.0);

  const double max_x = w - 1;
  const double max_y = h - 1;
  for (int y = 0; y < h; ++y) {
    auto m = mask.row(y);
    for (int x = 0; x < w; ++x) {
      if (!m[x]) continue;
      const auto [cx, cy] = vote(x, y);
      // Clamped values are non-negative, so truncation is floor.
      const int col = static_cast<int>(std::clamp(cx, 0.0, max_x)) / k;
      const int row = static_cast<int>(std::clamp(cy, 0.0, max_y)) / k;
      hist.at(row, col) += 1.0;
    }
  }
  return hist;
}

// `used[l]` receives the pixel count of label l.
template <typename Vote>
LabelMap AssignFrom(const BinaryMask& mask, const CentroidSet& centroids, Vote vote,
                    std::vector<std::size_t>* used) {
  const int h = mask.height();
  const int w = mask.width();
  LabelMap labels(h, w, 0u);
  const std::size_t n = centroids.size();
  if (used) used->assign(n + 1, 0);
  for (int y = 0; y < h; ++y) {
    auto m = mask.row(y);
    auto out = labels.row(y);
    for (int x = 0; x < w; ++x) {
      if (!m[x]) continue;
      const auto [cx, cy] = vote(x, y);
      std::size_t best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = cx - centroids[i].x;
        const double dy = cy - centroids[i].y;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) {
          best_d2 = d2;
          best = i;
        }
      }
      out[x] = static_cast<std::uint32_t>(best + 1);
      if (used) ++(*used)[best + 1];
    }
  }
  return labels;
}

struct MapVote {
  const CentroidMap& cmap;
  std::pair<double, double> operator()(int x, int y) const {
    return {cmap.cx(x, y), cmap.cy(x, y)};
  }
};

// Same arithmetic as build_centroid_map, without storing the maps.
struct DistanceVote {
  const ScalarMap& h_dist;
  const ScalarMap& v_dist;
  std::pair<double, double> operator()(int x, int y) const {
    return {x - h_dist(x, y), y - v_dist(x, y)};
  }
};

}  // namespace

Histogram2D build_histogram(const CentroidMap& cmap, int k) {
  if (k < 1) throw PreconditionError("histogram bin size k must be >= 1");
  RequireSameShape(cmap.mask, cmap.cx, "build_histogram cx");
  RequireSameShape(cmap.mask, cmap.cy, "build_histogram cy");
  return HistogramFrom(cmap.mask, k, MapVote{cmap});
}

Histogram2D smooth_histogram(const Histogram2D& hist, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  Histogram2D out = hist;
  if (out.counts.empty()) return out;
  convolve_separable(out.counts, out.bin_h, out.bin_w, kernel, Border::kZero);
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw PreconditionError("percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw PreconditionError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

Centroid bin_to_pixel(const Histogram2D& hist, double row, double col) {
  const double k = hist.k;
  const double x = (col + 0.5) * k - 0.5;
  const double y = (row + 0.5) * k - 0.5;
  return {std::clamp(x, 0.0, static_cast<double>(hist.source_w - 1)),
          std::clamp(y, 0.0, static_cast<double>(hist.source_h - 1))};
}

CentroidSet find_centroids(const Histogram2D& hist, int window, double t_percentile) {
  if (window < 1 || window % 2 == 0) throw PreconditionError("window must be odd and >= 1");
  if (hist.counts.empty()) return {};
  const double thresh = percentile(hist.counts, t_percentile);

  std::vector<double> peak = hist.counts;
  max_filter(peak, hist.bin_h, hist.bin_w, window);

  const int bh = hist.bin_h;
  const int bw = hist.bin_w;
  std::vector<std::uint8_t> qualifies(hist.counts.size(), 0);
  for (std::size_t i = 0; i < qualifies.size(); ++i) {
    qualifies[i] = hist.counts[i] == peak[i] && hist.counts[i] > thresh;
  }

  // Collapse 8-connected plateaus of equal qualifying values.
  CentroidSet out;
  std::vector<int> stack;
  for (int r = 0; r < bh; ++r) {
    for (int c = 0; c < bw; ++c) {
      const int seed = r * bw + c;
      if (!qualifies[seed]) continue;
      const double value = hist.counts[seed];
      qualifies[seed] = 0;
      stack.assign(1, seed);
      double sum_r = 0.0, sum_c = 0.0;
      std::size_t n = 0;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cr = cur / bw;
        const int cc = cur % bw;
        sum_r += cr;
        sum_c += cc;
        ++n;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = cr + dr;
            const int nc = cc + dc;
            if (nr < 0 || nc < 0 || nr >= bh || nc >= bw) continue;
            const int ni = nr * bw + nc;
            if (qualifies[ni] && hist.counts[ni] == value) {
              qualifies[ni] = 0;
              stack.push_back(ni);
            }
          }
        }
      }
      out.push_back(bin_to_pixel(hist, sum_r / n, sum_c / n));
    }
  }
  std::sort(out.begin(), out.end(), [](const Centroid& a, const Centroid& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LabelMap assign_instances(const CentroidMap& cmap, const CentroidSet& centroids) {
  RequireSameShape(cmap.mask, cmap.cx, "assign_instances cx");
  RequireSameShape(cmap.mask, cmap.cy, "assign_instances cy");
  if (centroids.empty() && count_foreground(cmap.mask) > 0) {
    throw PreconditionError("assign_instances needs at least one centroid");
  }
  return AssignFrom(cmap.mask, centroids, MapVote{cmap}, nullptr);
}

namespace {

Centroid GlobalMaxCentroid(const Histogram2D& hist) {
  const auto it = std::max_element(hist.counts.begin(), hist.counts.end());
  const auto idx = static_cast<int>(it - hist.counts.begin());
  return bin_to_pixel(hist, idx / hist.bin_w, idx % hist.bin_w);
}

// threshold() plus the [0, 1] range check of PredictionBundle::Validate in
// one pass.
BinaryMask ThresholdProbability(const ScalarMap& prob, double t, const char* what,
                                std::size_t* count) {
  BinaryMask mask(prob.height(), prob.width(), 0);
  std::size_t n = 0;
  bool in_range = true;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double v = prob[i];
    in_range &= v >= 0.0 && v <= 1.0;
    const bool on = v >= t;
    mask[i] = on;
    n += on;
  }
  if (!in_range) throw DimensionError(std::string(what) + " outside [0, 1]");
  if (count) *count = n;
  return mask;
}

}  // namespace

Separation separate(const PredictionBundle& bundle, const PostProcessConfig& cfg) {
  cfg.Validate();
  RequireSameShape(bundle.tissue_prob, bundle.pen_prob, "pen_prob");
  RequireSameShape(bundle.tissue_prob, bundle.h_dist, "h_dist");
  RequireSameShape(bundle.tissue_prob, bundle.v_dist, "v_dist");
  std::size_t fg = 0;
  Separation out{ThresholdProbability(bundle.tissue_prob, cfg.prob_threshold, "tissue_prob", &fg),
                 ThresholdProbability(bundle.pen_prob, cfg.prob_threshold, "pen_prob", nullptr),
                 LabelMap(bundle.height(), bundle.width(), 0u),
                 {}};
  if (fg == 0) return out;

  const DistanceVote vote{bundle.h_dist, bundle.v_dist};
  const Histogram2D smoothed =
      smooth_histogram(HistogramFrom(out.tissue, cfg.k, vote), cfg.sigma);
  CentroidSet centroids = find_centroids(smoothed, cfg.window, cfg.t_percentile);
  if (centroids.empty()) centroids.push_back(GlobalMaxCentroid(smoothed));

  std::vector<std::size_t> used;
  out.instances = AssignFrom(out.tissue, centroids, vote, &used);

  std::vector<std::uint32_t> remap(centroids.size() + 1, 0);
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    if (used[i + 1] == 0) continue;
    out.centroids.push_back(centroids[i]);
    remap[i + 1] = static_cast<std::uint32_t>(out.centroids.size());
  }
  if (out.centroids.size() != centroids.size()) {
    for (std::uint32_t& l : out.instances.values()) l = remap[l];
  }
  return out;
}

}  // namespace slidesep
