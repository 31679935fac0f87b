// Copyright 2026 The CenterTrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// \brief Training losses with analytic gradients w.r.t. the prediction.
#ifndef CENTERTRACK_LOSSES_HPP_
#define CENTERTRACK_LOSSES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "centertrack/targets.hpp"

namespace centertrack {

inline constexpr double kLogEpsilon = 1e-6;
inline constexpr double kFocalAlpha = 2.0;
inline constexpr double kFocalBeta = 4.0;

struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Clamps probabilities into [eps, 1 - eps].
std::vector<double> clamp_probabilities(std::span<const double> p, double eps = kLogEpsilon);

/**
 * Penalty-reduced pixel-wise focal loss over a heatmap:
 *
 *   L = -1/N sum { (1-p)^a log p                  if y == 1
 *                { (1-y)^b p^a log(1-p)           otherwise
 *
 * N counts cells with y exactly 1 (at least 1). `pred` must lie strictly in
 * (0, 1); callers clamp first. Throws std::invalid_argument on a size
 * mismatch or an out-of-range prediction.
 */
LossValue focal_loss(std::span<const double> pred, std::span<const double> target,
                     double alpha = kFocalAlpha, double beta = kFocalBeta);

/// Mean absolute error over masked cells. `pred` and `target` hold
/// `channels` values per cell; `mask` one flag per cell. An empty mask gives
/// zero loss and zero gradient.
LossValue l1_masked(std::span<const double> pred, std::span<const double> target,
                    std::span<const std::uint8_t> mask, std::size_t channels);

/// Packs the regression channels of `maps` as cell-major, 10 values per cell:
/// offset(2), height, log_size(3), rot(2), vel(2).
std::vector<double> pack_regression(const TargetMaps& maps);

/// L1 loss between predicted and target regression channels at target centers.
/// The gradient is laid out like pack_regression().
LossValue l1_regression_loss(const TargetMaps& pred, const TargetMaps& target);

/// Binary cross-entropy on the second-stage score; `pred` is clamped to
/// [eps, 1 - eps]. Gradient holds the single derivative dL/dpred.
LossValue score_bce(double pred, double target);

struct LossWeights {
  double heatmap = 1.0;
  double regression = 1.0;
};

/// Weighted sum of heatmap focal loss and regression L1 loss. Predicted
/// heatmap values are clamped before the focal term.
double first_stage_loss(const TargetMaps& pred, const TargetMaps& target,
                        const LossWeights& weights = {});

}  // namespace centertrack

#endif  // CENTERTRACK_LOSSES_HPP_
