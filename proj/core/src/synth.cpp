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

#include "slidesep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "slidesep/components.hpp"
#include "slidesep/filters.hpp"
#include "slidesep/rng.hpp"

namespace slidesep {
namespace {

// Stream ids keep the independent random decisions of one seed apart.
constexpr std::uint64_t kSceneStream = 1;
constexpr std::uint64_t kPenStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

constexpr int kPlacementAttempts = 400;
constexpr int kAdjacencyAttempts = 24;
constexpr int kSceneRestarts = 8;
constexpr int kFragmentAttempts = 12;
// Adjacent sections deviate from end-to-end alignment by up to this, radians.
constexpr double kAdjacencySpread = 0.3;
// Free-placed sections keep this many pixels of clearance from the others.
constexpr int kGap = 2;

struct Ellipse {
  double cx, cy, a, b, theta;
  double c = std::cos(theta), s = std::sin(theta);

  bool contains(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double u = (dx * c + dy * s) / a;
    const double v = (-dx * s + dy * c) / b;
    return u * u + v * v <= 1.0;
  }
};

// A section in local coordinates before placement.
struct Shape {
  int w = 0, h = 0;
  std::vector<std::uint8_t> bits;
  std::vector<PixelCoord> pixels;
  std::vector<PixelCoord> boundary;  // pixels with an 8-neighbour outside the shape
  double cx = 0.0, cy = 0.0;         // mass centroid
  double radius = 0.0;               // max distance from centroid to a pixel
  double axis = 0.0;                 // direction of the main ellipse's long axis

  bool has(int x, int y) const {
    return x >= 0 && y >= 0 && x < w && y < h && bits[static_cast<std::size_t>(y) * w + x];
  }
};

// Shapes keep a one-pixel empty margin, so neighbours need no bounds checks.
void FinishShape(Shape& s) {
  s.pixels.clear();
  s.boundary.clear();
  double sx = 0.0, sy = 0.0;
  const std::size_t w = s.w;
  for (int y = 1; y + 1 < s.h; ++y) {
    const std::uint8_t* row = s.bits.data() + y * w;
    for (int x = 1; x + 1 < s.w; ++x) {
      if (!row[x]) continue;
      s.pixels.push_back({x, y});
      sx += x;
      sy += y;
      const std::uint8_t* up = row - w;
      const std::uint8_t* down = row + w;
      const bool inner = up[x - 1] & up[x] & up[x + 1] & row[x - 1] & row[x + 1] &
                         down[x - 1] & down[x] & down[x + 1];
      if (!inner) s.boundary.push_back({x, y});
    }
  }
  const auto n = static_cast<double>(s.pixels.size());
  s.cx = sx / n;
  s.cy = sy / n;
  s.radius = 0.0;
  for (const PixelCoord& p : s.boundary) {
    s.radius = std::max(s.radius, std::hypot(p.x - s.cx, p.y - s.cy));
  }
}

// Removes n - 1 parallel bands so the shape falls apart into n pieces.
bool Fragment(Shape& s, int n_pieces, int max_pieces, Rng& rng) {
  const double phi = rng.uniform(0.0, std::numbers::pi);
  const double ux = std::cos(phi), uy = std::sin(phi);
  const double band = rng.uniform(3.0, 8.0);
  double lo = 1e300, hi = -1e300;
  for (const PixelCoord& p : s.pixels) {
    const double t = p.x * ux + p.y * uy;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  std::vector<std::uint8_t> bits = s.bits;
  for (const PixelCoord& p : s.pixels) {
    const double t = p.x * ux + p.y * uy;
    for (int j = 1; j < n_pieces; ++j) {
      const double cut = lo + (hi - lo) * j / n_pieces;
      if (std::abs(t - cut) <= band / 2) bits[static_cast<std::size_t>(p.y) * s.w + p.x] = 0;
    }
  }
  const Components cc =
      label_components(BinaryMask(s.h, s.w, bits), Connectivity::kEight);
  if (cc.count < 2 || static_cast<int>(cc.count) > max_pieces) return false;
  s.bits = std::move(bits);
  FinishShape(s);
  return true;
}

// `axis`, when given, fixes the long-axis direction of the main ellipse.
Shape MakeShape(const SceneParams& params, Rng& rng, std::optional<double> axis = {}) {
  std::vector<Ellipse> ellipses;
  const double a = rng.uniform(params.size_min, params.size_max);
  const double b = a * rng.uniform(0.6, 1.0);
  const double theta = axis ? *axis : rng.uniform(0.0, std::numbers::pi);
  ellipses.push_back({0.0, 0.0, a, b, theta});
  const auto extra = rng.uniform_int(0, 2);
  for (std::int64_t i = 0; i < extra; ++i) {
    const double dist = rng.uniform(0.2, 0.5) * a;
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double a2 = a * rng.uniform(0.5, 0.8);
    ellipses.push_back({dist * std::cos(phi), dist * std::sin(phi), a2,
                        a2 * rng.uniform(0.6, 1.0), rng.uniform(0.0, std::numbers::pi)});
  }
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const Ellipse& e : ellipses) {
    x0 = std::min(x0, e.cx - e.a);
    y0 = std::min(y0, e.cy - e.a);
    x1 = std::max(x1, e.cx + e.a);
    y1 = std::max(y1, e.cy + e.a);
  }
  const int ox = static_cast<int>(std::floor(x0)) - 1;
  const int oy = static_cast<int>(std::floor(y0)) - 1;
  Shape s;
  s.axis = theta;
  s.w = static_cast<int>(std::ceil(x1)) - ox + 2;
  s.h = static_cast<int>(std::ceil(y1)) - oy + 2;
  s.bits.assign(static_cast<std::size_t>(s.w) * s.h, 0);
  for (int y = 0; y < s.h; ++y) {
    for (int x = 0; x < s.w; ++x) {
      const double px = x + ox, py = y + oy;
      const bool in = std::any_of(ellipses.begin(), ellipses.end(),
                                  [&](const Ellipse& e) { return e.contains(px, py); });
      s.bits[static_cast<std::size_t>(y) * s.w + x] = in;
    }
  }
  // Sub-pixel ellipses still produce one pixel.
  s.bits[static_cast<std::size_t>(-oy) * s.w - ox] = 1;
  FinishShape(s);

  if (rng.bernoulli(params.fragmentation_prob)) {
    const int pieces = static_cast<int>(rng.uniform_int(2, params.max_fragments));
    for (int attempt = 0; attempt < kFragmentAttempts; ++attempt) {
      if (Fragment(s, pieces, params.max_fragments, rng)) break;
    }
  }
  return s;
}

struct Placed {
  Shape shape;
  int ox = 0, oy = 0;  // canvas position of local (0, 0)
  std::uint32_t label = 0;

  double cx() const { return ox + shape.cx; }
  double cy() const { return oy + shape.cy; }
};

class Canvas {
 public:
  Canvas(int h, int w) : occ_(h, w, 0u) {}

  LabelMap Release() { return std::move(occ_); }

  std::uint32_t at(int x, int y) const {
    if (x < 0 || y < 0 || x >= occ_.width() || y >= occ_.height()) return 0;
    return occ_(x, y);
  }

  bool InBounds(const Shape& s, int ox, int oy) const {
    return ox >= 0 && oy >= 0 && ox + s.w <= occ_.width() && oy + s.h <= occ_.height();
  }

  bool BoundaryHits(const Shape& s, int ox, int oy) const {
    return std::any_of(s.boundary.begin(), s.boundary.end(),
                       [&](const PixelCoord& p) { return at(ox + p.x, oy + p.y) != 0; });
  }

  // True when no occupied pixel within `gap` of the shape carries a label
  // other than `allowed`, and no earlier section sits inside the shape.
  bool Clear(const Shape& s, int ox, int oy, int gap, std::uint32_t allowed,
             const std::vector<Placed>& placed) const {
    for (const PixelCoord& p : s.boundary) {
      for (int dy = -gap; dy <= gap; ++dy) {
        for (int dx = -gap; dx <= gap; ++dx) {
          const std::uint32_t l = at(ox + p.x + dx, oy + p.y + dy);
          if (l != 0 && l != allowed) return false;
        }
      }
      if (at(ox + p.x, oy + p.y) != 0) return false;
    }
    for (const Placed& q : placed) {
      const PixelCoord first = q.shape.pixels.front();
      if (s.has(q.ox + first.x - ox, q.oy + first.y - oy)) return false;
    }
    return true;
  }

  bool Touches(const Shape& s, int ox, int oy, std::uint32_t label) const {
    for (const PixelCoord& p : s.boundary) {
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (at(ox + p.x + dx, oy + p.y + dy) == label) return true;
    }
    return false;
  }

  void Stamp(const Placed& p) {
    for (const PixelCoord& q : p.shape.pixels) occ_(p.ox + q.x, p.oy + q.y) = p.label;
  }

 private:
  LabelMap occ_;
};

bool SeparatedFrom(const std::vector<Placed>& placed, double cx, double cy, double min_sep) {
  return std::all_of(placed.begin(), placed.end(), [&](const Placed& q) {
    return std::hypot(q.cx() - cx, q.cy() - cy) >= min_sep;
  });
}

// Slides the shape toward `prev` along a ray near `heading` until the next
// 1 px step would overlap; the last free position then touches (each step
// moves every pixel by at most one in x and y).
bool PlaceAdjacent(const Canvas& canvas, const std::vector<Placed>& placed, const Placed& prev,
                   Placed& cand, double heading, double min_sep, Rng& rng) {
  const Shape& s = cand.shape;
  for (int attempt = 0; attempt < kAdjacencyAttempts; ++attempt) {
    // Alternate between both ends of the axis.
    const double phi = heading + (attempt % 2 ? std::numbers::pi : 0.0) +
                       rng.uniform(-kAdjacencySpread, kAdjacencySpread);
    const double ux = std::cos(phi), uy = std::sin(phi);
    auto position = [&](int t) {
      return std::pair<int, int>{
          static_cast<int>(std::lround(prev.cx() + t * ux - s.cx)),
          static_cast<int>(std::lround(prev.cy() + t * uy - s.cy))};
    };
    int t = static_cast<int>(std::ceil(prev.shape.radius + s.radius)) + 4;
    if (canvas.BoundaryHits(s, position(t).first, position(t).second)) continue;
    while (t > 0) {
      const auto [x, y] = position(t - 1);
      if (canvas.BoundaryHits(s, x, y)) break;
      --t;
    }
    if (t == 0) continue;
    const auto [ox, oy] = position(t);
    if (!canvas.InBounds(s, ox, oy)) continue;
    if (!SeparatedFrom(placed, ox + s.cx, oy + s.cy, min_sep)) continue;
    if (!canvas.Clear(s, ox, oy, kGap, prev.label, placed)) continue;
    if (!canvas.Touches(s, ox, oy, prev.label)) continue;
    cand.ox = ox;
    cand.oy = oy;
    return true;
  }
  return false;
}

bool PlaceFree(const Canvas& canvas, const std::vector<Placed>& placed, Placed& cand,
               const SceneParams& params, Rng& rng) {
  const Shape& s = cand.shape;
  if (s.w > params.width || s.h > params.height) return false;
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const int ox = static_cast<int>(rng.uniform_int(0, params.width - s.w));
    const int oy = static_cast<int>(rng.uniform_int(0, params.height - s.h));
    if (!SeparatedFrom(placed, ox + s.cx, oy + s.cy, params.min_separation)) continue;
    if (!canvas.Clear(s, ox, oy, kGap, 0, placed)) continue;
    cand.ox = ox;
    cand.oy = oy;
    return true;
  }
  return false;
}

// One attempt at laying out all sections; false if any section did not fit.
bool LayOut(const SceneParams& params, Rng& rng, Canvas& canvas,
            std::vector<std::pair<std::uint32_t, std::uint32_t>>& adjacent) {
  std::vector<Placed> placed;
  for (int i = 0; i < params.n_sections; ++i) {
    const auto label = static_cast<std::uint32_t>(i + 1);
    bool ok = false;
    Placed cand;
    if (!placed.empty() && rng.bernoulli(params.adjacency_prob)) {
      // End to end along the previous section's long axis, as consecutive
      // cuts are often laid out on a slide. This also keeps touching
      // sections' centroids far apart.
      const Placed& prev = placed.back();
      const double heading = prev.shape.axis + (rng.bernoulli(0.5) ? std::numbers::pi : 0.0);
      const double axis = prev.shape.axis + rng.uniform(-kAdjacencySpread, kAdjacencySpread);
      cand = {MakeShape(params, rng, axis), 0, 0, label};
      ok = PlaceAdjacent(canvas, placed, prev, cand, heading, params.min_separation, rng);
      if (ok) adjacent.emplace_back(prev.label, label);
    } else {
      cand = {MakeShape(params, rng), 0, 0, label};
    }
    if (!ok) ok = PlaceFree(canvas, placed, cand, params, rng);
    if (!ok) return false;
    canvas.Stamp(cand);
    placed.push_back(std::move(cand));
  }
  return true;
}

LabelMap DilateLabels(const LabelMap& labels, int radius) {
  std::vector<PixelCoord> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius && (dx || dy)) offsets.push_back({dx, dy});
  std::stable_sort(offsets.begin(), offsets.end(), [](PixelCoord a, PixelCoord b) {
    return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
  });
  LabelMap out = labels;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      if (labels(x, y)) continue;
      for (const PixelCoord& o : offsets) {
        const PixelCoord q{x + o.x, y + o.y};
        if (labels.contains(q) && labels(q.x, q.y)) {
          out(x, y) = labels(q.x, q.y);
          break;
        }
      }
    }
  }
  return out;
}

// Clears labelled pixels that have background within `radius`. Pixels
// outside the raster do not count as background.
LabelMap ErodeLabels(const LabelMap& labels, int radius) {
  LabelMap out = labels;
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      if (!labels(x, y)) continue;
      bool keep = true;
      for (int dy = -radius; dy <= radius && keep; ++dy) {
        for (int dx = -radius; dx <= radius && keep; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          const PixelCoord q{x + dx, y + dy};
          if (labels.contains(q) && !labels(q.x, q.y)) keep = false;
        }
      }
      if (!keep) out(x, y) = 0;
    }
  }
  return out;
}

LabelMap Jitter(const LabelMap& labels, double max_jitter, Rng& rng) {
  const int j = static_cast<int>(std::floor(max_jitter));
  if (j <= 0) return labels;
  const auto r = static_cast<int>(rng.uniform_int(-j, j));
  if (r > 0) return DilateLabels(labels, r);
  if (r < 0) return ErodeLabels(labels, -r);
  return labels;
}

template <typename T>
ScalarMap NoisyProbability(const Raster<T>& mask, const NoiseParams& noise, Rng& rng) {
  ScalarMap prob(mask.height(), mask.width(), 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    bool on = mask[i] != 0;
    if (noise.mask_flip_prob > 0.0 && rng.bernoulli(noise.mask_flip_prob)) on = !on;
    prob[i] = on ? 1.0 : 0.0;
  }
  if (noise.prob_blur_sigma > 0.0) {
    const std::vector<double> kernel = gaussian_kernel(noise.prob_blur_sigma);
    convolve_separable(prob.values(), prob.height(), prob.width(), kernel,
                       Border::kReplicate);
    for (double& v : prob.values()) v = std::clamp(v, 0.0, 1.0);
  }
  return prob;
}

LabelMap AsLabels(const BinaryMask& mask) {
  LabelMap out(mask.height(), mask.width(), 0u);
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 1u : 0u;
  return out;
}

}  // namespace

void SceneParams::Validate() const {
  if (height < 64 || width < 64) throw PreconditionError("scene dimensions must be >= 64");
  if (n_sections < 0) throw PreconditionError("n_sections must be >= 0");
  if (!(size_min > 0.0) || !(size_min <= size_max)) {
    throw PreconditionError("size range must satisfy 0 < min <= max");
  }
  if (!(fragmentation_prob >= 0.0 && fragmentation_prob <= 1.0)) {
    throw PreconditionError("fragmentation_prob must lie in [0, 1]");
  }
  if (!(adjacency_prob >= 0.0 && adjacency_prob <= 1.0)) {
    throw PreconditionError("adjacency_prob must lie in [0, 1]");
  }
  if (max_fragments < 2) throw PreconditionError("max_fragments must be >= 2");
  if (n_pen_strokes < 0) throw PreconditionError("n_pen_strokes must be >= 0");
  if (!(min_separation >= 0.0)) throw PreconditionError("min_separation must be >= 0");
}

void NoiseParams::Validate() const {
  for (double v : {dist_noise_sigma, boundary_jitter, prob_blur_sigma}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("noise parameters must be >= 0");
  }
  if (!(mask_flip_prob >= 0.0 && mask_flip_prob <= 1.0)) {
    throw PreconditionError("mask_flip_prob must lie in [0, 1]");
  }
}

std::vector<Centroid> label_centroids(const LabelMap& labels) {
  std::uint32_t n = 0;
  for (std::uint32_t l : labels.values()) n = std::max(n, l);
  std::vector<double> sx(n + 1, 0.0), sy(n + 1, 0.0), cnt(n + 1, 0.0);
  for (int y = 0; y < labels.height(); ++y) {
    auto row = labels.row(y);
    for (int x = 0; x < labels.width(); ++x) {
      const std::uint32_t l = row[x];
      if (!l) continue;
      sx[l] += x;
      sy[l] += y;
      cnt[l] += 1.0;
    }
  }
  std::vector<Centroid> out(n);
  for (std::uint32_t l = 1; l <= n; ++l) {
    if (cnt[l] > 0.0) out[l - 1] = {sx[l] / cnt[l], sy[l] / cnt[l]};
  }
  return out;
}

std::pair<ScalarMap, ScalarMap> distance_maps(const LabelMap& labels,
                                              const std::vector<Centroid>& centroids) {
  std::pair<ScalarMap, ScalarMap> out{ScalarMap(labels.height(), labels.width(), 0.0),
                                      ScalarMap(labels.height(), labels.width(), 0.0)};
  for (int y = 0; y < labels.height(); ++y) {
    auto row = labels.row(y);
    auto h = out.first.row(y);
    auto v = out.second.row(y);
    for (int x = 0; x < labels.width(); ++x) {
      const std::uint32_t l = row[x];
      if (!l) continue;
      if (l > centroids.size()) throw PreconditionError("label without a centroid");
      h[x] = x - centroids[l - 1].x;
      v[x] = y - centroids[l - 1].y;
    }
  }
  return out;
}

SyntheticScene generate_scene(const SceneParams& params) {
  params.Validate();
  Rng rng(params.seed, kSceneStream);
  SyntheticScene scene;
  bool ok = false;
  for (int restart = 0; restart < kSceneRestarts && !ok; ++restart) {
    Canvas canvas(params.height, params.width);
    scene.adjacent_pairs.clear();
    ok = LayOut(params, rng, canvas, scene.adjacent_pairs);
    if (ok) scene.gt_instances = canvas.Release();
  }
  if (!ok) {
    throw GenerationError("could not place " + std::to_string(params.n_sections) +
                          " sections on a " + std::to_string(params.height) + "x" +
                          std::to_string(params.width) +
                          " canvas with min_separation=" +
                          std::to_string(params.min_separation) + " and size_max=" +
                          std::to_string(params.size_max));
  }
  scene.tissue = BinaryMask(params.height, params.width, 0);
  for (std::size_t i = 0; i < scene.tissue.size(); ++i) {
    scene.tissue[i] = scene.gt_instances[i] ? 1 : 0;
  }
  scene.pen = BinaryMask(params.height, params.width, 0);
  scene.centroids = label_centroids(scene.gt_instances);
  auto [h, v] = distance_maps(scene.gt_instances, scene.centroids);
  scene.gt_h_dist = std::move(h);
  scene.gt_v_dist = std::move(v);
  if (params.n_pen_strokes > 0) {
    scene = render_pen_strokes(std::move(scene), params.n_pen_strokes,
                               splitmix64(params.seed ^ 0x5045'4E00ull));
  }
  return scene;
}

BinaryMask rasterize_stroke(const PenStroke& stroke, int height, int width) {
  BinaryMask mask(height, width, 0);
  const double r = stroke.radius;
  const double r2 = r * r;
  auto stamp_segment = [&](Centroid a, Centroid b) {
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        double t = len2 > 0.0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double dx = x - (a.x + t * vx), dy = y - (a.y + t * vy);
        if (dx * dx + dy * dy <= r2) mask(x, y) = 1;
      }
    }
  };
  if (stroke.vertices.size() == 1) stamp_segment(stroke.vertices[0], stroke.vertices[0]);
  for (std::size_t i = 1; i < stroke.vertices.size(); ++i) {
    stamp_segment(stroke.vertices[i - 1], stroke.vertices[i]);
  }
  return mask;
}

SyntheticScene add_pen_stroke(SyntheticScene scene, const PenStroke& stroke) {
  const BinaryMask m = rasterize_stroke(stroke, scene.pen.height(), scene.pen.width());
  for (std::size_t i = 0; i < m.size(); ++i) scene.pen[i] |= m[i];
  scene.pen_strokes.push_back(stroke);
  return scene;
}

SyntheticScene render_pen_strokes(SyntheticScene scene, int n, std::uint64_t seed) {
  if (n < 0) throw PreconditionError("stroke count must be >= 0");
  Rng rng(seed, kPenStream);
  const int h = scene.pen.height();
  const int w = scene.pen.width();
  const double reach = 0.25 * std::min(h, w);
  for (int i = 0; i < n; ++i) {
    PenStroke stroke;
    stroke.radius = rng.uniform(1.5, 4.0);
    const auto n_vertices = rng.uniform_int(2, 5);
    Centroid p{rng.uniform(0.0, w - 1.0), rng.uniform(0.0, h - 1.0)};
    double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    stroke.vertices.push_back(p);
    for (std::int64_t v = 1; v < n_vertices; ++v) {
      heading += rng.uniform(-0.8, 0.8);
      const double len = rng.uniform(0.2, 1.0) * reach;
      p = {std::clamp(p.x + len * std::cos(heading), 0.0, w - 1.0),
           std::clamp(p.y + len * std::sin(heading), 0.0, h - 1.0)};
      stroke.vertices.push_back(p);
    }
    scene = add_pen_stroke(std::move(scene), stroke);
  }
  return scene;
}

PredictionBundle corrupt(const SyntheticScene& scene, const NoiseParams& noise) {
  noise.Validate();
  Rng rng(noise.seed, kNoiseStream);
  PredictionBundle out;
  LabelMap jittered;
  const LabelMap* labels = &scene.gt_instances;
  if (noise.boundary_jitter >= 1.0) {
    jittered = Jitter(scene.gt_instances, noise.boundary_jitter, rng);
    labels = &jittered;
    out.tissue_prob = NoisyProbability(*labels, noise, rng);
    if (count_foreground(scene.pen) == 0 && noise.mask_flip_prob == 0.0) {
      // Jitter and blur keep an empty mask empty.
      out.pen_prob = ScalarMap(scene.pen.height(), scene.pen.width(), 0.0);
    } else {
      out.pen_prob = NoisyProbability(
          Jitter(AsLabels(scene.pen), noise.boundary_jitter, rng), noise, rng);
    }
  } else {
    out.tissue_prob = NoisyProbability(*labels, noise, rng);
    out.pen_prob = NoisyProbability(scene.pen, noise, rng);
  }
  // Without jitter the labels are the ground truth, whose maps are stored.
  auto [h, v] = labels == &scene.gt_instances
                    ? std::pair<ScalarMap, ScalarMap>{scene.gt_h_dist, scene.gt_v_dist}
                    : distance_maps(*labels, scene.centroids);
  if (noise.dist_noise_sigma > 0.0) {
    for (double& d : h.values()) d += rng.normal(0.0, noise.dist_noise_sigma);
    for (double& d : v.values()) d += rng.normal(0.0, noise.dist_noise_sigma);
  }
  out.h_dist = std::move(h);
  out.v_dist = std::move(v);
  return out;
}

PredictionBundle exact_bundle(const SyntheticScene& scene) {
  return corrupt(scene, NoiseParams{});
}

GroundTruth ground_truth(const SyntheticScene& scene) {
  return {scene.tissue, scene.pen, scene.gt_h_dist, scene.gt_v_dist};
}

}  // namespace slidesep
