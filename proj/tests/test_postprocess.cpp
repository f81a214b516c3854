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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "slidesep/errors.hpp"
#include "slidesep/filters.hpp"
#include "slidesep/metrics.hpp"
#include "slidesep/postprocess.hpp"
#include "slidesep/rng.hpp"
#include "slidesep/synth.hpp"

using namespace slidesep;

namespace {

Histogram2D EmptyHist(int bh, int bw, int k = 20) {
  Histogram2D h;
  h.bin_h = bh;
  h.bin_w = bw;
  h.k = k;
  h.source_h = bh * k;
  h.source_w = bw * k;
  h.counts.assign(static_cast<std::size_t>(bh) * bw, 0.0);
  return h;
}

CentroidMap MapFromVotes(const BinaryMask& mask, const ScalarMap& cx, const ScalarMap& cy) {
  return CentroidMap{cx, cy, mask};
}

}  // namespace

TEST_CASE("centroid map subtracts distances on the mask") {
  const BinaryMask full(4, 5, 1);
  const CentroidMap a = build_centroid_map(full, ScalarMap(4, 5, 0.0), ScalarMap(4, 5, 0.0));
  const CoordinateMaps c = coordinate_maps(4, 5);
  CHECK(a.cx == c.horizontal);
  CHECK(a.cy == c.vertical);

  const CentroidMap b =
      build_centroid_map(BinaryMask(4, 5, 0), ScalarMap(4, 5, 3.0), ScalarMap(4, 5, 3.0));
  for (double v : b.cx.values()) CHECK(v == 0.0);
  for (double v : b.cy.values()) CHECK(v == 0.0);

  ScalarMap dh(5, 5), dv(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      dh(x, y) = x - 2;
      dv(x, y) = y - 2;
    }
  const CentroidMap sq = build_centroid_map(BinaryMask(5, 5, 1), dh, dv);
  for (double v : sq.cx.values()) CHECK(v == 2.0);
  for (double v : sq.cy.values()) CHECK(v == 2.0);

  CHECK_THROWS_AS(build_centroid_map(full, ScalarMap(4, 4), ScalarMap(4, 5)), DimensionError);
}

TEST_CASE("histogram bins by floor division") {
  BinaryMask mask(100, 100, 0);
  ScalarMap cx(100, 100, 0.0), cy(100, 100, 0.0);
  mask(10, 10) = 1;
  cx(10, 10) = 45;
  cy(10, 10) = 67;
  const Histogram2D h = build_histogram(MapFromVotes(mask, cx, cy), 20);
  CHECK(h.bin_h == 5);
  CHECK(h.bin_w == 5);
  CHECK(h.at(3, 2) == 1.0);
  CHECK(h.total() == 1.0);

  BinaryMask many(30, 30, 1);
  const Histogram2D g =
      build_histogram(MapFromVotes(many, ScalarMap(30, 30, 12.0), ScalarMap(30, 30, 25.0)), 20);
  CHECK(g.bin_h == 2);
  CHECK(g.at(1, 0) == 900.0);
  CHECK(g.total() == 900.0);
}

TEST_CASE("histogram mass equals foreground count") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const BinaryMask mask = oracle::RandomMask(rng, 400, 400, rng.uniform());
    // Votes partly outside the image to exercise clamping.
    const ScalarMap cx = oracle::RandomMap(rng, 400, 400, -50, 450);
    const ScalarMap cy = oracle::RandomMap(rng, 400, 400, -50, 450);
    const Histogram2D h = build_histogram(MapFromVotes(mask, cx, cy), 20);
    CHECK(h.total() == static_cast<double>(count_foreground(mask)));
    // Direct recount of one clamped bin.
    double corner = 0.0;
    for (int y = 0; y < 400; ++y)
      for (int x = 0; x < 400; ++x)
        if (mask(x, y) && std::clamp(cx(x, y), 0.0, 399.0) < 20 && std::clamp(cy(x, y), 0.0, 399.0) < 20)
          corner += 1;
    CHECK(h.at(0, 0) == corner);
  }
}

TEST_CASE("smoothing an impulse reproduces the sampled gaussian") {
  Histogram2D h = EmptyHist(21, 21);
  h.at(10, 10) = 1.0;
  CHECK(smooth_histogram(h, 0.0).counts == h.counts);
  const Histogram2D s = smooth_histogram(h, 2.0);
  double z = 0.0;
  for (int dy = -8; dy <= 8; ++dy)
    for (int dx = -8; dx <= 8; ++dx) z += std::exp(-(dx * dx + dy * dy) / 8.0);
  for (int r = 0; r < 21; ++r)
    for (int c = 0; c < 21; ++c) {
      const int dy = r - 10, dx = c - 10;
      const double want =
          std::abs(dy) <= 8 && std::abs(dx) <= 8 ? std::exp(-(dx * dx + dy * dy) / 8.0) / z : 0.0;
      CHECK(s.at(r, c) == doctest::Approx(want).epsilon(1e-12));
    }
  CHECK(s.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("smoothing never gains mass") {
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    Histogram2D h = EmptyHist(12, 17);
    for (double& v : h.counts) v = rng.bernoulli(0.3) ? rng.uniform(0, 5) : 0.0;
    const Histogram2D s = smooth_histogram(h, rng.uniform(0.5, 3));
    CHECK(s.total() <= h.total() + 1e-9);
  }
}

TEST_CASE("percentile uses linear interpolation") {
  CHECK(percentile({1, 2, 3, 4}, 50) == 2.5);
  CHECK(percentile({5}, 98) == 5);
  CHECK(percentile({0, 10}, 98) == doctest::Approx(9.8));
  CHECK(percentile({3, 1, 2}, 100) == 3);
  CHECK(percentile({3, 1, 2}, 0) == 1);
  CHECK_THROWS_AS(percentile({}, 50), PreconditionError);
  CHECK_THROWS_AS(percentile({1}, 101), PreconditionError);
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> v(1 + rng.uniform_int(0, 200));
    for (double& x : v) x = rng.uniform(0, 1);
    const double p = rng.uniform(0, 100);
    CHECK(percentile(v, p) == doctest::Approx(oracle::Percentile(v, p)).epsilon(1e-14));
  }
}

TEST_CASE("find_centroids: single bin, separated and merged impulses") {
  Histogram2D one = EmptyHist(10, 10);
  one.at(4, 7) = 3.0;
  const CentroidSet c1 = find_centroids(one, 15, 98);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0] == Centroid{7 * 20 + 9.5, 4 * 20 + 9.5});

  CHECK(find_centroids(EmptyHist(10, 10), 15, 98).empty());

  Histogram2D far = EmptyHist(30, 50);
  far.at(15, 10) = 100;
  far.at(15, 30) = 100;
  const Histogram2D sf = smooth_histogram(far, 2.0);
  CHECK(find_centroids(sf, 15, 98).size() == 2);
  CHECK(find_centroids(sf, 15, 98) == oracle::DenseNms(sf, 15, 98));

  Histogram2D near = EmptyHist(30, 50);
  near.at(15, 20) = 100;
  near.at(15, 24) = 100;
  const Histogram2D sn = smooth_histogram(near, 2.0);
  const CentroidSet merged = find_centroids(sn, 15, 98);
  CHECK(merged.size() == 1);
  CHECK(merged == oracle::DenseNms(sn, 15, 98));
  // The two centre bins tie; their plateau collapses to column 22.
  CHECK(merged[0].x == doctest::Approx(22 * 20 + 9.5));

  CHECK_THROWS_AS(find_centroids(one, 4, 98), PreconditionError);
}

TEST_CASE("find_centroids equals dense NMS on random histograms") {
  Rng rng(24);
  for (int trial = 0; trial < 60; ++trial) {
    Histogram2D h = EmptyHist(5 + static_cast<int>(rng.uniform_int(0, 30)),
                              5 + static_cast<int>(rng.uniform_int(0, 30)),
                              1 + static_cast<int>(rng.uniform_int(0, 25)));
    h.source_h -= static_cast<int>(rng.uniform_int(0, h.k - 1));
    // Small integers make plateaus and ties likely.
    const bool sparse = rng.bernoulli(0.5);
    for (double& v : h.counts)
      v = sparse ? (rng.bernoulli(0.05) ? static_cast<double>(rng.uniform_int(1, 3)) : 0.0)
                 : static_cast<double>(rng.uniform_int(0, 4));
    if (rng.bernoulli(0.5)) h = smooth_histogram(h, rng.uniform(0.5, 3));
    const int s = 1 + 2 * static_cast<int>(rng.uniform_int(0, 9));
    const double p = rng.uniform(50, 100);
    CHECK(find_centroids(h, s, p) == oracle::DenseNms(h, s, p));
  }
}

TEST_CASE("assignment picks the nearest centroid, lower index on ties") {
  BinaryMask mask(1, 2, 1);
  const ScalarMap cx(1, 2, std::vector<double>{19, 20});
  const ScalarMap cy(1, 2, std::vector<double>{10, 10});
  const LabelMap l = assign_instances(CentroidMap{cx, cy, mask}, {{10, 10}, {30, 10}});
  CHECK(l[0] == 1);
  CHECK(l[1] == 1);

  CHECK_THROWS_AS(assign_instances(CentroidMap{cx, cy, mask}, {}), PreconditionError);
  BinaryMask none(1, 2, 0);
  CHECK(max_label(assign_instances(CentroidMap{cx, cy, none}, {})) == 0);
}

TEST_CASE("assignment equals exhaustive nearest scan") {
  Rng rng(25);
  for (int trial = 0; trial < 40; ++trial) {
    const int h = 20 + static_cast<int>(rng.uniform_int(0, 40));
    const int w = 20 + static_cast<int>(rng.uniform_int(0, 40));
    const BinaryMask mask = oracle::RandomMask(rng, h, w, 0.6);
    // Integer votes and centroids so exact ties occur.
    ScalarMap cx(h, w), cy(h, w);
    for (double& v : cx.values()) v = static_cast<double>(rng.uniform_int(0, w - 1));
    for (double& v : cy.values()) v = static_cast<double>(rng.uniform_int(0, h - 1));
    CentroidSet cs(1 + rng.uniform_int(0, 6));
    for (Centroid& c : cs) c = {static_cast<double>(rng.uniform_int(0, w - 1)),
                                static_cast<double>(rng.uniform_int(0, h - 1))};
    const CentroidMap cmap{cx, cy, mask};
    CHECK(assign_instances(cmap, cs) == oracle::NearestScan(cmap, cs));
  }
}

TEST_CASE("separate: empty input") {
  const PredictionBundle b{ScalarMap(64, 64, 0.0), ScalarMap(64, 64, 0.0),
                           ScalarMap(64, 64, 0.0), ScalarMap(64, 64, 0.0)};
  const Separation s = separate(b, {});
  CHECK(count_foreground(s.tissue) == 0);
  CHECK(count_foreground(s.pen) == 0);
  CHECK(max_label(s.instances) == 0);
  CHECK(s.centroids.empty());
}

TEST_CASE("separate: one blob and two touching blobs with exact maps") {
  SceneParams p;
  p.height = 512;
  p.width = 512;
  p.n_sections = 1;
  p.fragmentation_prob = 0.0;
  p.adjacency_prob = 0.0;
  p.seed = 9;
  const SyntheticScene one = generate_scene(p);
  const Separation s1 = separate(exact_bundle(one), {});
  CHECK(s1.instance_count() == 1);
  CHECK(match_instances(s1.instances, one.gt_instances).mean_dice == 1.0);

  // Two blobs forced to touch, centroids far enough apart.
  p.width = 800;
  p.n_sections = 2;
  p.adjacency_prob = 1.0;
  p.size_min = 160;
  p.size_max = 175;
  p.min_separation = 300;
  int checked = 0;
  for (std::uint64_t seed = 1; seed < 40 && checked < 3; ++seed) {
    p.seed = seed;
    const SyntheticScene two = generate_scene(p);
    if (two.adjacent_pairs.empty()) continue;
    ++checked;
    const Separation s2 = separate(exact_bundle(two), {});
    CHECK(s2.instance_count() == 2);
    CHECK(match_instances(s2.instances, two.gt_instances).mean_dice == 1.0);
  }
  CHECK(checked == 3);
}

TEST_CASE("separate: fallback and label compaction") {
  // Uniform votes spread over every bin: no bin beats the 98th percentile.
  const int n = 200;
  PredictionBundle b{ScalarMap(n, n, 1.0), ScalarMap(n, n, 0.0), ScalarMap(n, n, 0.0),
                     ScalarMap(n, n, 0.0)};
  PostProcessConfig cfg;
  cfg.sigma = 0.0;
  const Separation s = separate(b, cfg);
  CHECK(s.instance_count() == 1);
  CHECK(max_label(s.instances) == 1);
  CHECK(count_foreground(s.tissue) == static_cast<std::size_t>(n * n));

  // Every label in 1..C is used.
  Rng rng(26);
  for (int t = 0; t < 10; ++t) {
    PredictionBundle r{oracle::RandomMap(rng, 120, 120, 0, 1), oracle::RandomMap(rng, 120, 120, 0, 1),
                       oracle::RandomMap(rng, 120, 120, -60, 60),
                       oracle::RandomMap(rng, 120, 120, -60, 60)};
    const Separation sr = separate(r, {});
    std::vector<std::size_t> used(sr.instance_count() + 1, 0);
    for (auto l : sr.instances.values()) {
      REQUIRE(l <= sr.instance_count());
      ++used[l];
    }
    for (std::size_t l = 1; l < used.size(); ++l) CHECK(used[l] > 0);
  }
}

TEST_CASE("separate is deterministic and validates input") {
  SceneParams p;
  p.height = 400;
  p.width = 600;
  p.n_sections = 3;
  p.seed = 77;
  p.size_min = 60;
  p.size_max = 80;
  const SyntheticScene sc = generate_scene(p);
  NoiseParams np{2, 0.01, 1, 1, 5};
  const PredictionBundle b = corrupt(sc, np);
  const Separation a = separate(b, {});
  const Separation c = separate(b, {});
  CHECK(a.instances == c.instances);
  CHECK(a.centroids == c.centroids);

  PredictionBundle bad = b;
  bad.v_dist = ScalarMap(400, 601, 0.0);
  CHECK_THROWS_AS(separate(bad, {}), DimensionError);
  PostProcessConfig cfg;
  cfg.window = 14;
  CHECK_THROWS(separate(b, cfg));
  cfg = {};
  cfg.k = 0;
  CHECK_THROWS(separate(b, cfg));
}
