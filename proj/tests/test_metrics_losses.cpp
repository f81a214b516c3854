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
#include "slidesep/losses.hpp"
#include "slidesep/metrics.hpp"
#include "slidesep/rng.hpp"

using namespace slidesep;

namespace {

BinaryMask MaskFrom(int h, int w, std::vector<std::uint8_t> v) { return BinaryMask(h, w, std::move(v)); }

ScalarMap AsProb(const BinaryMask& m) {
  ScalarMap p(m.height(), m.width(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) p[i] = m[i];
  return p;
}

constexpr double kH = 1e-5;
constexpr double kTol = 1e-6;

}  // namespace

TEST_CASE("dice score") {
  const BinaryMask a = MaskFrom(2, 4, {1, 1, 1, 1, 0, 0, 0, 0});
  const BinaryMask b = MaskFrom(2, 4, {0, 0, 1, 1, 1, 1, 0, 0});
  const BinaryMask c = MaskFrom(2, 4, {0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(dice_score(a, a) == 1.0);
  CHECK(dice_score(a, c) == 0.0);
  CHECK(dice_score(a, b) == 0.5);
  CHECK(dice_score(BinaryMask(2, 2, 0), BinaryMask(2, 2, 0)) == 1.0);
  CHECK_THROWS_AS(dice_score(a, BinaryMask(4, 2, 0)), DimensionError);
}

TEST_CASE("count error and max label") {
  LabelMap three(2, 2, std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(count_error(three, 3) == 0);
  LabelMap two(2, 2, std::vector<std::uint32_t>{0, 1, 2, 2});
  CHECK(count_error(two, 3) == 1);
  CHECK(count_error(LabelMap(2, 2, 0), 2) == 2);
  CHECK(max_label(three) == 3);
}

TEST_CASE("instance matching is permutation invariant") {
  Rng rng(31);
  LabelMap gt(30, 30, 0);
  for (auto& v : gt.values()) v = static_cast<std::uint32_t>(rng.uniform_int(0, 4));
  LabelMap perm = gt;
  const std::uint32_t map[] = {0, 3, 1, 4, 2};
  for (auto& v : perm.values()) v = map[v];
  const InstanceAgreement m = match_instances(perm, gt);
  CHECK(m.mean_dice == 1.0);
  CHECK(m.matches.size() == 4);
  for (const InstanceMatch& x : m.matches) CHECK(map[x.gt_label] == x.pred_label);

  // One missing instance costs 1/4 of the mean.
  LabelMap merged = gt;
  for (auto& v : merged.values()) v = v == 4 ? 3 : v;
  const InstanceAgreement mm = match_instances(merged, gt);
  CHECK(mm.pred_count == 3);
  CHECK(mm.gt_count == 4);
  CHECK(mm.mean_dice < 0.76);
  CHECK(match_instances(LabelMap(3, 3, 0), LabelMap(3, 3, 0)).mean_dice == 1.0);
}

TEST_CASE("dice loss limits") {
  Rng rng(32);
  const BinaryMask g = oracle::RandomMask(rng, 8, 8, 0.5);
  CHECK(dice_loss(AsProb(g), g, 1e-9).loss == doctest::Approx(0.0).epsilon(1e-9));
  ScalarMap inv = AsProb(g);
  for (double& v : inv.values()) v = 1.0 - v;
  CHECK(dice_loss(inv, g, 1e-9).loss == doctest::Approx(1.0));
}

TEST_CASE("bce loss values") {
  const BinaryMask g = MaskFrom(2, 2, {0, 1, 1, 0});
  CHECK(bce_loss(AsProb(g), g, 1e-7).loss == doctest::Approx(-std::log1p(-1e-7)).epsilon(1e-6));
  CHECK(bce_loss(ScalarMap(2, 2, 0.5), g).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // Clamped pixels carry no gradient.
  const LossResult r = bce_loss(AsProb(g), g, 1e-7);
  for (double v : r.grad.values()) CHECK(v == 0.0);
}

TEST_CASE("mse loss values") {
  const BinaryMask m = MaskFrom(2, 2, {1, 1, 1, 1});
  const ScalarMap gt(2, 2, std::vector<double>{1, 2, 3, 4});
  CHECK(mse_loss(gt, gt, m).loss == 0.0);
  ScalarMap shifted = gt;
  for (double& v : shifted.values()) v += 3;
  CHECK(mse_loss(shifted, gt, m).loss == 9.0);
  CHECK(mse_loss(shifted, gt, BinaryMask(2, 2, 0)).loss == 0.0);
}

TEST_CASE("gradient mse loss values") {
  Rng rng(33);
  const ScalarMap h = oracle::RandomMap(rng, 8, 8, -5, 5), v = oracle::RandomMap(rng, 8, 8, -5, 5);
  const BinaryMask m = oracle::RandomMask(rng, 8, 8, 0.5);
  CHECK(gradient_mse_loss(h, v, h, v, m).loss == 0.0);
  ScalarMap h2 = h, v2 = v;
  for (double& x : h2.values()) x += 4.0;
  for (double& x : v2.values()) x -= 1.5;
  CHECK(gradient_mse_loss(h2, v2, h, v, m).loss == doctest::Approx(0.0).epsilon(1e-24));
}

TEST_CASE("diff_x and diff_y use replicate borders") {
  const ScalarMap f(2, 3, std::vector<double>{1, 2, 4, 10, 20, 40});
  const ScalarMap dx = diff_x(f), dy = diff_y(f);
  CHECK(dx(0, 0) == 0.5);  // (2 - 1) / 2
  CHECK(dx(1, 0) == 1.5);
  CHECK(dx(2, 0) == 1.0);
  CHECK(dy(0, 0) == 4.5);
  CHECK(dy(2, 1) == 18.0);
}

TEST_CASE("loss gradients match central differences") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarMap p = oracle::RandomMap(rng, 8, 8, 0.02, 0.98);
    const BinaryMask g = oracle::RandomMask(rng, 8, 8, 0.5);
    const BinaryMask m = oracle::RandomMask(rng, 8, 8, 0.6);

    const ScalarMap fd_dice = oracle::FiniteDifference(
        p, [&](const ScalarMap& x) { return dice_loss(x, g).loss; }, kH);
    CHECK(oracle::RelativeError(dice_loss(p, g).grad, fd_dice) <= kTol);

    const ScalarMap fd_bce = oracle::FiniteDifference(
        p, [&](const ScalarMap& x) { return bce_loss(x, g).loss; }, kH);
    CHECK(oracle::RelativeError(bce_loss(p, g).grad, fd_bce) <= kTol);

    const ScalarMap a = oracle::RandomMap(rng, 8, 8, -10, 10), b = oracle::RandomMap(rng, 8, 8, -10, 10);
    const ScalarMap fd_mse = oracle::FiniteDifference(
        a, [&](const ScalarMap& x) { return mse_loss(x, b, m).loss; }, kH);
    CHECK(oracle::RelativeError(mse_loss(a, b, m).grad, fd_mse) <= kTol);

    const ScalarMap c = oracle::RandomMap(rng, 8, 8, -10, 10), d = oracle::RandomMap(rng, 8, 8, -10, 10);
    const GradientLossResult gl = gradient_mse_loss(a, c, b, d, m);
    const ScalarMap fd_h = oracle::FiniteDifference(
        a, [&](const ScalarMap& x) { return gradient_mse_loss(x, c, b, d, m).loss; }, kH);
    const ScalarMap fd_v = oracle::FiniteDifference(
        c, [&](const ScalarMap& x) { return gradient_mse_loss(a, x, b, d, m).loss; }, kH);
    CHECK(oracle::RelativeError(gl.grad_h, fd_h) <= kTol);
    CHECK(oracle::RelativeError(gl.grad_v, fd_v) <= kTol);
  }
}

TEST_CASE("total loss recomposes its terms") {
  Rng rng(35);
  const int n = 16;
  GroundTruth gt{oracle::RandomMask(rng, n, n, 0.5), oracle::RandomMask(rng, n, n, 0.1),
                 oracle::RandomMap(rng, n, n, -20, 20), oracle::RandomMap(rng, n, n, -20, 20)};
  PredictionBundle pred{oracle::RandomMap(rng, n, n, 0.01, 0.99), oracle::RandomMap(rng, n, n, 0.01, 0.99),
                        oracle::RandomMap(rng, n, n, -20, 20), oracle::RandomMap(rng, n, n, -20, 20)};
  LossWeights w{0.7, 3.0, 0.2, 1.3};
  const double want = w.w_dice * (dice_loss(pred.tissue_prob, gt.tissue).loss +
                                  dice_loss(pred.pen_prob, gt.pen).loss) +
                      w.w_ce * (bce_loss(pred.tissue_prob, gt.tissue).loss +
                                bce_loss(pred.pen_prob, gt.pen).loss) +
                      w.w_mse * (mse_loss(pred.h_dist, gt.h_dist, gt.tissue).loss +
                                 mse_loss(pred.v_dist, gt.v_dist, gt.tissue).loss) +
                      w.w_grad * gradient_mse_loss(pred.h_dist, pred.v_dist, gt.h_dist,
                                                   gt.v_dist, gt.tissue).loss;
  CHECK(total_loss(pred, gt, w) == doctest::Approx(want).epsilon(1e-12));
  CHECK(total_loss(pred, gt, LossWeights{0, 0, 0, 0}) == 0.0);

  PredictionBundle perfect{AsProb(gt.tissue), AsProb(gt.pen), gt.h_dist, gt.v_dist};
  CHECK(total_loss(perfect, gt, LossWeights{}) < 1e-5);
  CHECK_THROWS(LossWeights{-1, 0, 0, 0}.Validate());
}
