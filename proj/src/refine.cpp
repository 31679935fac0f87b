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

#include "centertrack/refine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "centertrack/random.hpp"

namespace centertrack {

std::array<Vec2, kSurfacePoints> surface_center_points(const Box3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.l;
  const double hw = 0.5 * box.w;
  return {{
      {box.cx, box.cy},
      {box.cx + hl * c, box.cy + hl * s},
      {box.cx - hl * c, box.cy - hl * s},
      {box.cx - hw * s, box.cy + hw * c},
      {box.cx + hw * s, box.cy - hw * c},
  }};
}

std::vector<double> gather_features(const FeatureMap& map, const Box3D& box) {
  std::vector<double> out;
  out.reserve(kSurfacePoints * map.channels());
  for (const Vec2& p : surface_center_points(box)) {
    const Vec2 g = world_to_grid(map.spec(), p.x, p.y);
    const std::vector<double> sample = bilinear(map, g.x, g.y);
    out.insert(out.end(), sample.begin(), sample.end());
  }
  // A non-finite cell in any sampled neighborhood poisons the blend.
  if (!std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("gather_features: non-finite feature map values");
  }
  return out;
}

double score_target(double iou3d) {
  return std::min(1.0, std::max(0.0, 2.0 * iou3d - 0.5));
}

double fuse_score(double first, double second) {
  return std::sqrt(first * second);
}

Detection apply_refinement(const Detection& det, const Refinement& r) {
  Detection out = det;
  out.box = Box3D(det.box.cx + r.dcx, det.box.cy + r.dcy, det.box.cz + r.dcz,
                  det.box.w * std::exp(r.dlog_w), det.box.l * std::exp(r.dlog_l),
                  det.box.h * std::exp(r.dlog_h), det.box.yaw + r.dyaw);
  return out;
}

Detection RefinedDetection::output() const {
  Detection out = apply_refinement(base, refinement);
  out.score = fused_score;
  return out;
}

SecondStageScorer::Output OracleScorer::evaluate(const Detection& proposal,
                                                 std::span<const double> /*features*/) const {
  double best = 0.0;
  for (const Box3D& gt : ground_truth_) best = std::max(best, iou_3d(proposal.box, gt));
  return {score_target(best), {}};
}

RandomProjectionScorer::RandomProjectionScorer(std::size_t feature_dim, std::uint64_t seed)
    : weights_(feature_dim) {
  Rng rng(seed);
  const double scale = feature_dim == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(feature_dim));
  for (double& w : weights_) w = scale * rng.normal();
  bias_ = rng.normal();
}

SecondStageScorer::Output RandomProjectionScorer::evaluate(const Detection& /*proposal*/,
                                                           std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw std::invalid_argument("RandomProjectionScorer: feature dimension mismatch");
  }
  double z = bias_;
  for (std::size_t i = 0; i < features.size(); ++i) z += weights_[i] * features[i];
  return {1.0 / (1.0 + std::exp(-z)), {}};
}

std::vector<RefinedDetection> refine_detections(std::span<const Detection> proposals,
                                                const FeatureMap& features,
                                                const SecondStageScorer& scorer) {
  std::vector<RefinedDetection> out;
  out.reserve(proposals.size());
  for (const Detection& det : proposals) {
    const std::vector<double> f = gather_features(features, det.box);
    const SecondStageScorer::Output s = scorer.evaluate(det, f);
    const double stage2 = std::clamp(s.score, 0.0, 1.0);
    out.push_back({det, stage2, fuse_score(det.score, stage2), s.refinement});
  }
  std::stable_sort(out.begin(), out.end(), [](const RefinedDetection& a, const RefinedDetection& b) {
    return a.fused_score > b.fused_score;
  });
  return out;
}

}  // namespace centertrack
