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

#include "centertrack/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace centertrack {

std::vector<double> clamp_probabilities(std::span<const double> p, double eps) {
  std::vector<double> out(p.size());
  std::transform(p.begin(), p.end(), out.begin(),
                 [eps](double v) { return std::clamp(v, eps, 1.0 - eps); });
  return out;
}

LossValue focal_loss(std::span<const double> pred, std::span<const double> target, double alpha,
                     double beta) {
  if (pred.size() != target.size()) throw std::invalid_argument("focal_loss: shape mismatch");

  std::size_t num_pos = 0;
  for (const double y : target) num_pos += (y == 1.0) ? 1 : 0;
  const double norm = 1.0 / static_cast<double>(std::max<std::size_t>(num_pos, 1));

  LossValue out;
  out.gradient.resize(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred[i];
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::invalid_argument("focal_loss: prediction outside (0, 1); clamp before calling");
    }
    const double y = target[i];
    if (y == 1.0) {
      const double q = 1.0 - p;
      const double log_p = std::log(p);
      sum += std::pow(q, alpha) * log_p;
      // d/dp [(1-p)^a log p] = -a (1-p)^(a-1) log p + (1-p)^a / p
      out.gradient[i] = -norm * (-alpha * std::pow(q, alpha - 1.0) * log_p + std::pow(q, alpha) / p);
    } else {
      const double weight = std::pow(1.0 - y, beta);
      const double log_q = std::log(1.0 - p);
      sum += weight * std::pow(p, alpha) * log_q;
      // d/dp [p^a log(1-p)] = a p^(a-1) log(1-p) - p^a / (1-p)
      out.gradient[i] =
          -norm * weight * (alpha * std::pow(p, alpha - 1.0) * log_q - std::pow(p, alpha) / (1.0 - p));
    }
  }
  out.value = -norm * sum;
  return out;
}

LossValue l1_masked(std::span<const double> pred, std::span<const double> target,
                    std::span<const std::uint8_t> mask, std::size_t channels) {
  if (pred.size() != target.size() || pred.size() != mask.size() * channels) {
    throw std::invalid_argument("l1_masked: shape mismatch");
  }
  LossValue out;
  out.gradient.assign(pred.size(), 0.0);
  const auto masked = static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(),
                                                             [](std::uint8_t m) { return m != 0; }));
  if (masked == 0) return out;

  const double norm = 1.0 / static_cast<double>(masked * channels);
  double sum = 0.0;
  for (std::size_t cell = 0; cell < mask.size(); ++cell) {
    if (mask[cell] == 0) continue;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t i = cell * channels + c;
      const double diff = pred[i] - target[i];
      sum += std::abs(diff);
      out.gradient[i] = diff > 0.0 ? norm : (diff < 0.0 ? -norm : 0.0);
    }
  }
  out.value = sum * norm;
  return out;
}

std::vector<double> pack_regression(const TargetMaps& maps) {
  const GridSpec& spec = maps.spec();
  std::vector<double> out;
  out.reserve(spec.num_cells() * kRegressionChannels);
  for (std::size_t ix = 0; ix < spec.num_x(); ++ix) {
    for (std::size_t iy = 0; iy < spec.num_y(); ++iy) {
      for (const FeatureMap* m : {&maps.offset, &maps.height, &maps.log_size, &maps.rot, &maps.vel}) {
        const auto cell = m->cell(ix, iy);
        out.insert(out.end(), cell.begin(), cell.end());
      }
    }
  }
  return out;
}

LossValue l1_regression_loss(const TargetMaps& pred, const TargetMaps& target) {
  if (!(pred.spec() == target.spec())) {
    throw std::invalid_argument("l1_regression_loss: grid mismatch");
  }
  const std::vector<double> p = pack_regression(pred);
  const std::vector<double> t = pack_regression(target);
  return l1_masked(p, t, target.valid_mask, kRegressionChannels);
}

LossValue score_bce(double pred, double target) {
  const double p = std::clamp(pred, kLogEpsilon, 1.0 - kLogEpsilon);
  LossValue out;
  out.value = -target * std::log(p) - (1.0 - target) * std::log(1.0 - p);
  out.gradient = {(p - target) / (p * (1.0 - p))};
  return out;
}

double first_stage_loss(const TargetMaps& pred, const TargetMaps& target,
                        const LossWeights& weights) {
  const std::vector<double> heat = clamp_probabilities(pred.heatmap.values());
  const double focal = focal_loss(heat, target.heatmap.values()).value;
  const double reg = l1_regression_loss(pred, target).value;
  return weights.heatmap * focal + weights.regression * reg;
}

}  // namespace centertrack
