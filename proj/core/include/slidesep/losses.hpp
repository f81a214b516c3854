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

// Training objectives for the segmentation and distance heads, each returning
// the loss value together with its analytic gradient with respect to the
// prediction. All reductions run in row-major order so results are
// reproducible bit for bit.

#ifndef SLIDESEP_LOSSES_HPP_
#define SLIDESEP_LOSSES_HPP_

#include "slidesep/raster.hpp"

namespace slidesep {

struct LossWeights {
  double w_dice = 1.0;
  double w_ce = 10.0;
  double w_mse = 1.0;
  double w_grad = 1.0;

  void Validate() const;
};

struct LossResult {
  double loss = 0.0;
  ScalarMap grad;
};

struct GradientLossResult {
  double loss = 0.0;
  ScalarMap grad_h;
  ScalarMap grad_v;
};

// Soft Dice: 1 - (2 sum(p g) + eps) / (sum(p) + sum(g) + eps).
LossResult dice_loss(const ScalarMap& pred_prob, const BinaryMask& gt, double eps = 1e-6);

// Mean binary cross-entropy with p clamped to [eps, 1 - eps]. The gradient is
// zero where the clamp is active.
LossResult bce_loss(const ScalarMap& pred_prob, const BinaryMask& gt, double eps = 1e-7);

// Mean of (p - g)^2 over mask pixels; 0 for an empty mask.
LossResult mse_loss(const ScalarMap& pred, const ScalarMap& gt, const BinaryMask& mask);

// Central difference with replicate border: (f[i+1] - f[i-1]) / 2, indices
// clamped into the image.
ScalarMap diff_x(const ScalarMap& f);
ScalarMap diff_y(const ScalarMap& f);

// Mean over mask pixels of (dx pred_h - dx gt_h)^2 + (dy pred_v - dy gt_v)^2.
GradientLossResult gradient_mse_loss(const ScalarMap& pred_h, const ScalarMap& pred_v,
                                     const ScalarMap& gt_h, const ScalarMap& gt_v,
                                     const BinaryMask& mask);

struct GroundTruth {
  BinaryMask tissue;
  BinaryMask pen;
  ScalarMap h_dist;
  ScalarMap v_dist;
};

struct LossBreakdown {
  double dice_tissue = 0.0;
  double dice_pen = 0.0;
  double bce_tissue = 0.0;
  double bce_pen = 0.0;
  double mse = 0.0;       // horizontal + vertical, over gt tissue
  double grad_mse = 0.0;  // over gt tissue
  double total = 0.0;
};

LossBreakdown loss_breakdown(const PredictionBundle& pred, const GroundTruth& gt,
                             const LossWeights& weights);

// w_dice (dice_t + dice_p) + w_ce (bce_t + bce_p) + w_mse mse + w_grad grad_mse.
double total_loss(const PredictionBundle& pred, const GroundTruth& gt,
                  const LossWeights& weights);

}  // namespace slidesep

#endif  // SLIDESEP_LOSSES_HPP_
