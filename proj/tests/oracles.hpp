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

// Slow, obviously-correct reference implementations used as test oracles.
// None of them calls into the library code they check.

#ifndef SLIDESEP_TESTS_ORACLES_HPP_
#define SLIDESEP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "slidesep/postprocess.hpp"
#include "slidesep/raster.hpp"
#include "slidesep/rng.hpp"

namespace oracle {

using slidesep::BinaryMask;
using slidesep::Centroid;
using slidesep::CentroidMap;
using slidesep::CentroidSet;
using slidesep::Histogram2D;
using slidesep::LabelMap;
using slidesep::ScalarMap;

// numpy.percentile(..., interpolation="linear") via two nth_element probes.
inline double Percentile(std::vector<double> v, double p) {
  const double rank = p / 100.0 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double a = v[lo];
  if (lo + 1 >= v.size()) return a;
  const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  return a + (b - a) * (rank - static_cast<double>(lo));
}

// Full 2-D Gaussian, zero padding, truncated at ceil(4 sigma).
inline std::vector<double> DenseSmooth(const std::vector<double>& in, int h, int w, double sigma) {
  if (sigma == 0.0) return in;
  const int r = static_cast<int>(std::ceil(4.0 * sigma));
  double z = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) z += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
  std::vector<double> out(in.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int sy = y + dy, sx = x + dx;
          if (sy < 0 || sx < 0 || sy >= h || sx >= w) continue;
          acc += in[static_cast<std::size_t>(sy) * w + sx] *
                 std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = acc / z;
    }
  }
  return out;
}

// Box maximum by scanning every window cell, indices clamped to the image.
inline std::vector<double> DenseMaxFilter(const std::vector<double>& in, int h, int w, int s) {
  const int r = s / 2;
  std::vector<double> out(in.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = -std::numeric_limits<double>::infinity();
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int sy = std::clamp(y + dy, 0, h - 1), sx = std::clamp(x + dx, 0, w - 1);
          m = std::max(m, in[static_cast<std::size_t>(sy) * w + sx]);
        }
      out[static_cast<std::size_t>(y) * w + x] = m;
    }
  }
  return out;
}

// Union-find over a flat index space.
class Dsu {
 public:
  explicit Dsu(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t Find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void Join(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Non-maximum suppression by direct window scans. Surviving bins are merged
// with union-find when 8-adjacent and equal, and each group is reported at
// its mean bin position mapped to the bin-centre pixel.
inline CentroidSet DenseNms(const Histogram2D& hist, int s, double t_percentile) {
  const int h = hist.bin_h, w = hist.bin_w, r = s / 2;
  const double thresh = Percentile(hist.counts, t_percentile);
  std::vector<char> keep(hist.counts.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = hist.at(y, x);
      if (!(v > thresh)) continue;
      bool is_max = true;
      for (int dy = -r; dy <= r && is_max; ++dy)
        for (int dx = -r; dx <= r && is_max; ++dx) {
          const int sy = std::clamp(y + dy, 0, h - 1), sx = std::clamp(x + dx, 0, w - 1);
          if (hist.at(sy, sx) > v) is_max = false;
        }
      keep[static_cast<std::size_t>(y) * w + x] = is_max;
    }
  }
  Dsu dsu(keep.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!keep[i]) continue;
      for (int y2 = 0; y2 < h; ++y2)
        for (int x2 = 0; x2 < w; ++x2) {
          const std::size_t j = static_cast<std::size_t>(y2) * w + x2;
          if (keep[j] && std::abs(y2 - y) <= 1 && std::abs(x2 - x) <= 1 &&
              hist.counts[i] == hist.counts[j])
            dsu.Join(i, j);
        }
    }
  std::vector<double> sr(keep.size(), 0.0), sc(keep.size(), 0.0), n(keep.size(), 0.0);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i]) continue;
    const std::size_t root = dsu.Find(i);
    sr[root] += static_cast<double>(i / w);
    sc[root] += static_cast<double>(i % w);
    n[root] += 1.0;
  }
  CentroidSet out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (n[i] == 0.0) continue;
    const double row = sr[i] / n[i], col = sc[i] / n[i];
    const double x = std::clamp((col + 0.5) * hist.k - 0.5, 0.0, hist.source_w - 1.0);
    const double y = std::clamp((row + 0.5) * hist.k - 0.5, 0.0, hist.source_h - 1.0);
    out.push_back({x, y});
  }
  std::sort(out.begin(), out.end(),
            [](const Centroid& a, const Centroid& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// For every foreground pixel, scan all centroids and keep the first one at
// the smallest squared distance.
inline LabelMap NearestScan(const CentroidMap& cmap, const CentroidSet& cs) {
  LabelMap out(cmap.mask.height(), cmap.mask.width(), 0);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      if (!cmap.mask(x, y)) continue;
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t label = 0;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const double dx = cmap.cx(x, y) - cs[i].x, dy = cmap.cy(x, y) - cs[i].y;
        const double d = dx * dx + dy * dy;
        if (d < best) {
          best = d;
          label = static_cast<std::uint32_t>(i + 1);
        }
      }
      out(x, y) = label;
    }
  return out;
}

// Connected components by repeated union of neighbouring foreground pixels.
inline std::size_t CountComponents(const BinaryMask& m, bool eight) {
  const int h = m.height(), w = m.width();
  Dsu dsu(m.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!m(x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const int nb[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
      for (int k = 0; k < (eight ? 4 : 2); ++k) {
        const int nx = x + nb[k][0], ny = y + nb[k][1];
        if (nx < 0 || ny >= h || nx >= w || !m(nx, ny)) continue;
        dsu.Join(i, static_cast<std::size_t>(ny) * w + nx);
      }
    }
  std::size_t n = 0;
  for (std::size_t i = 0; i < m.size(); ++i) n += m[i] && dsu.Find(i) == i;
  return n;
}

// Central differences of a scalar function of a map, one pixel at a time.
inline ScalarMap FiniteDifference(ScalarMap x, const std::function<double(const ScalarMap&)>& f,
                                  double h) {
  ScalarMap g(x.height(), x.width(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// ||a - n|| / max(||a||, ||n||) in the Euclidean norm; 0 when both vanish.
// Element-wise ratios are ill-conditioned for components near zero, where
// the central difference is dominated by rounding in the loss (~eps |L| / h).
inline double RelativeError(const ScalarMap& analytic, const ScalarMap& numeric) {
  double diff = 0.0, na = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    na += analytic[i] * analytic[i];
    nn += numeric[i] * numeric[i];
  }
  const double scale = std::sqrt(std::max(na, nn));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

// Largest element-wise |a - n| / max(|a|, |n|), with exact zeros on both
// sides counted as agreement. Reported for information only.
inline double MaxRelativeError(const ScalarMap& analytic, const ScalarMap& numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    const double scale = std::max(std::abs(a), std::abs(n));
    if (scale < 1e-12) {
      worst = std::max(worst, std::abs(a - n) / 1e-12);
      continue;
    }
    worst = std::max(worst, std::abs(a - n) / scale);
  }
  return worst;
}

inline ScalarMap RandomMap(slidesep::Rng& rng, int h, int w, double lo, double hi) {
  ScalarMap m(h, w, 0.0);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

inline BinaryMask RandomMask(slidesep::Rng& rng, int h, int w, double p) {
  BinaryMask m(h, w, 0);
  for (auto& v : m.values()) v = rng.bernoulli(p);
  return m;
}

}  // namespace oracle

#endif  // SLIDESEP_TESTS_ORACLES_HPP_
