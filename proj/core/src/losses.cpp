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

#include "slidesep/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slidesep {
namespace {

void RequireUnitRange(const ScalarMap& p, const char* what) {
  for (double v : p.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw PreconditionError(std::string(what) + ": probabilities must lie in [0, 1]");
    }
  }
}

// Adds D^T r into `out`, where D is the replicate-border central difference
// along x (dx = 1, dy = 0) or y (dx = 0, dy = 1).
void AddDifferenceAdjoint(const ScalarMap& r, int dx, int dy, ScalarMap& out) {
  const int h = r.height();
  const int w = r.width();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double v = r(x, y);
      if (v == 0.0) continue;
      const int xp = std::min(x + dx, w - 1), yp = std::min(y + dy, h - 1);
      const int xm = std::max(x - dx, 0), ym = std::max(y - dy, 0);
      out(xp, yp) += 0.5 * v;
      out(xm, ym) -= 0.5 * v;
    }
  }
}

ScalarMap Difference(const ScalarMap& f, int dx, int dy) {
  const int h = f.height();
  const int w = f.width();
  ScalarMap out(h, w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xp = std::min(x + dx, w - 1), yp = std::min(y + dy, h - 1);
      const int xm = std::max(x - dx, 0), ym = std::max(y - dy, 0);
      out(x, y) = 0.5 * (f(xp, yp) - f(xm, ym));
    }
  }
  return out;
}

}  // namespace

void LossWeights::Validate() const {
  for (double w : {w_dice, w_ce, w_mse, w_grad}) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw PreconditionError("loss weights must be >= 0");
  }
}

LossResult dice_loss(const ScalarMap& pred_prob, const BinaryMask& gt, double eps) {
  RequireSameShape(pred_prob, gt, "dice_loss");
  RequireUnitRange(pred_prob, "dice_loss");
  if (!(eps > 0.0)) throw PreconditionError("dice_loss eps must be > 0");
  double inter = 0.0, sum_p = 0.0, sum_g = 0.0;
  for (std::size_t i = 0; i < pred_prob.size(); ++i) {
    inter += pred_prob[i] * gt[i];
    sum_p += pred_prob[i];
    sum_g += gt[i];
  }
  const double num = 2.0 * inter + eps;
  const double den = sum_p + sum_g + eps;
  LossResult out{1.0 - num / den, ScalarMap(pred_prob.height(), pred_prob.width(), 0.0)};
  const double den2 = den * den;
  for (std::size_t i = 0; i < pred_prob.size(); ++i) {
    out.grad[i] = -(2.0 * gt[i] * den - num) / den2;
  }
  return out;
}

LossResult bce_loss(const ScalarMap& pred_prob, const BinaryMask& gt, double eps) {
  RequireSameShape(pred_prob, gt, "bce_loss");
  if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("bce_loss eps must lie in (0, 0.5)");
  const double n = static_cast<double>(pred_prob.size());
  LossResult out{0.0, ScalarMap(pred_prob.height(), pred_prob.width(), 0.0)};
  for (std::size_t i = 0; i < pred_prob.size(); ++i) {
    const double p = pred_prob[i];
    const double g = gt[i];
    const double pc = std::clamp(p, eps, 1.0 - eps);
    const double qc = std::clamp(1.0 - p, eps, 1.0 - eps);
    out.loss -= g * std::log(pc) + (1.0 - g) * std::log(qc);
    double d = 0.0;
    if (p > eps && p < 1.0 - eps) d -= g / pc;
    if (1.0 - p > eps && 1.0 - p < 1.0 - eps) d += (1.0 - g) / qc;
    out.grad[i] = d / n;
  }
  out.loss /= n;
  return out;
}

LossResult mse_loss(const ScalarMap& pred, const ScalarMap& gt, const BinaryMask& mask) {
  RequireSameShape(pred, gt, "mse_loss");
  RequireSameShape(pred, mask, "mse_loss mask");
  LossResult out{0.0, ScalarMap(pred.height(), pred.width(), 0.0)};
  const auto n = static_cast<double>(count_foreground(mask));
  if (n == 0.0) return out;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!mask[i]) continue;
    const double r = pred[i] - gt[i];
    out.loss += r * r;
    out.grad[i] = 2.0 * r / n;
  }
  out.loss /= n;
  return out;
}

ScalarMap diff_x(const ScalarMap& f) { return Difference(f, 1, 0); }
ScalarMap diff_y(const ScalarMap& f) { return Difference(f, 0, 1); }

GradientLossResult gradient_mse_loss(const ScalarMap& pred_h, const ScalarMap& pred_v,
                                     const ScalarMap& gt_h, const ScalarMap& gt_v,
                                     const BinaryMask& mask) {
  RequireSameShape(pred_h, pred_v, "gradient_mse_loss pred_v");
  RequireSameShape(pred_h, gt_h, "gradient_mse_loss gt_h");
  RequireSameShape(pred_h, gt_v, "gradient_mse_loss gt_v");
  RequireSameShape(pred_h, mask, "gradient_mse_loss mask");
  const int h = pred_h.height();
  const int w = pred_h.width();
  GradientLossResult out{0.0, ScalarMap(h, w, 0.0), ScalarMap(h, w, 0.0)};
  const auto n = static_cast<double>(count_foreground(mask));
  if (n == 0.0) return out;

  const ScalarMap pdx = diff_x(pred_h), gdx = diff_x(gt_h);
  const ScalarMap pdy = diff_y(pred_v), gdy = diff_y(gt_v);
  // Residuals scaled by dL/dr = 2 r / n, zero outside the mask.
  ScalarMap rx(h, w, 0.0), ry(h, w, 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i]) continue;
    const double ex = pdx[i] - gdx[i];
    const double ey = pdy[i] - gdy[i];
    out.loss += ex * ex + ey * ey;
    rx[i] = 2.0 * ex / n;
    ry[i] = 2.0 * ey / n;
  }
  out.loss /= n;
  AddDifferenceAdjoint(rx, 1, 0, out.grad_h);
  AddDifferenceAdjoint(ry, 0, 1, out.grad_v);
  return out;
}

LossBreakdown loss_breakdown(const PredictionBundle& pred, const GroundTruth& gt,
                             const LossWeights& weights) {
  weights.Validate();
  LossBreakdown b;
  b.dice_tissue = dice_loss(pred.tissue_prob, gt.tissue).loss;
  b.dice_pen = dice_loss(pred.pen_prob, gt.pen).loss;
  b.bce_tissue = bce_loss(pred.tissue_prob, gt.tissue).loss;
  b.bce_pen = bce_loss(pred.pen_prob, gt.pen).loss;
  b.mse = mse_loss(pred.h_dist, gt.h_dist, gt.tissue).loss +
          mse_loss(pred.v_dist, gt.v_dist, gt.tissue).loss;
  b.grad_mse =
      gradient_mse_loss(pred.h_dist, pred.v_dist, gt.h_dist, gt.v_dist, gt.tissue).loss;
  b.total = weights.w_dice * (b.dice_tissue + b.dice_pen) +
            weights.w_ce * (b.bce_tissue + b.bce_pen) + weights.w_mse * b.mse +
            weights.w_grad * b.grad_mse;
  return b;
}

double total_loss(const PredictionBundle& pred, const GroundTruth& gt,
                  const LossWeights& weights) {
  return loss_breakdown(pred, gt, weights).total;
}

}  // namespace slidesep
