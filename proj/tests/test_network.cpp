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
#include <filesystem>

#include "doctest.h"
#include "slidesep/errors.hpp"
#include "slidesep/network.hpp"
#include "slidesep/rng.hpp"

using namespace slidesep;

namespace {

NetworkConfig Tiny() {
  NetworkConfig c;
  c.levels = 2;
  c.top_factor = 2;
  c.deep_factor = 4;
  c.base_channels = 4;
  return c;
}

FeatureTensor RandomImage(int c, int h, int w, std::uint64_t seed) {
  FeatureTensor t(c, h, w);
  Rng rng(seed);
  for (double& v : t.values) v = rng.uniform();
  return t;
}

}  // namespace

TEST_CASE("total downsampling") {
  CHECK(total_downsampling(NetworkConfig{}) == 512);
  CHECK(total_downsampling(Tiny()) == 8);
  NetworkConfig bad;
  bad.levels = 1;
  CHECK_THROWS_AS(total_downsampling(bad), PreconditionError);
}

TEST_CASE("forward keeps spatial dims") {
  for (auto [h, w] : {std::pair{8, 8}, std::pair{16, 40}, std::pair{64, 24}}) {
    const PredictionBundle b = forward(RandomImage(3, h, w, 1), Tiny(), 7);
    CHECK(b.height() == h);
    CHECK(b.width() == w);
    CHECK(b.h_dist.height() == h);
    CHECK(b.v_dist.width() == w);
    CHECK_NOTHROW(b.Validate());
  }
}

TEST_CASE("forward rejects sizes the encoder cannot divide") {
  CHECK_THROWS_AS(forward(RandomImage(3, 12, 16, 1), Tiny(), 7), ShapeError);
  CHECK_THROWS_AS(forward(RandomImage(2, 16, 16, 1), Tiny(), 7), ShapeError);
  try {
    forward(RandomImage(3, 12, 16, 1), Tiny(), 7);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("pad_to_multiple") != std::string::npos);
  }
}

TEST_CASE("distance heads are scaled by tissue probability") {
  const UNet net(Tiny(), 3);
  const ForwardOutput o = net.Forward(RandomImage(3, 32, 48, 2));
  double max_raw = 0.0;
  for (std::size_t i = 0; i < o.raw_h.size(); ++i) {
    CHECK(o.bundle.h_dist[i] == o.raw_h[i] * o.bundle.tissue_prob[i]);
    CHECK(o.bundle.v_dist[i] == o.raw_v[i] * o.bundle.tissue_prob[i]);
    max_raw = std::max({max_raw, std::abs(o.raw_h[i]), std::abs(o.raw_v[i])});
    if (o.bundle.tissue_prob[i] < 1e-6) CHECK(std::abs(o.bundle.h_dist[i]) <= 1e-6 * max_raw);
  }
  CHECK(max_raw > 0.0);
}

TEST_CASE("forward is deterministic per seed") {
  const FeatureTensor x = RandomImage(3, 16, 16, 4);
  CHECK(forward(x, Tiny(), 1).tissue_prob == forward(x, Tiny(), 1).tissue_prob);
  CHECK(forward(x, Tiny(), 1).tissue_prob != forward(x, Tiny(), 2).tissue_prob);
}

TEST_CASE("weights round trip through npy files") {
  const auto dir = std::filesystem::temp_directory_path() / "slidesep_test_weights";
  std::filesystem::remove_all(dir);
  UNet a(Tiny(), 5);
  a.SaveWeights(dir);
  UNet b(Tiny(), 6);
  b.LoadWeights(dir);
  const FeatureTensor x = RandomImage(3, 16, 16, 4);
  // Weights are stored as float32, so outputs agree to single precision.
  const PredictionBundle pa = a.Forward(x).bundle, pb = b.Forward(x).bundle;
  for (std::size_t i = 0; i < pa.tissue_prob.size(); ++i)
    CHECK(pb.tissue_prob[i] == doctest::Approx(pa.tissue_prob[i]).epsilon(1e-5));
  std::filesystem::remove(dir / "tissue.head.weight.npy");
  UNet c(Tiny(), 6);
  CHECK_THROWS(c.LoadWeights(dir));
  std::filesystem::remove_all(dir);
}
