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
/// \brief Second stage: surface-center features, IoU-guided score target,
/// box refinement and score fusion.
#ifndef CENTERTRACK_REFINE_HPP_
#define CENTERTRACK_REFINE_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "centertrack/decode.hpp"
#include "centertrack/geometry.hpp"
#include "centertrack/grid.hpp"

namespace centertrack {

inline constexpr std::size_t kSurfacePoints = 5;

/// BEV sample points in the order [center, +l face, -l face, +w face, -w face].
/// Top and bottom face centers project onto the center and are not repeated.
std::array<Vec2, kSurfacePoints> surface_center_points(const Box3D& box);

/// Bilinear features at the five surface points, concatenated (5 * F values).
/// Points outside the grid are clamped onto its border. Throws
/// std::invalid_argument when a sampled neighborhood holds non-finite values.
std::vector<double> gather_features(const FeatureMap& map, const Box3D& box);

/// IoU-guided confidence target: min(1, max(0, 2 * iou - 0.5)).
double score_target(double iou3d);

/// Geometric mean of the first- and second-stage scores.
double fuse_score(double first, double second);

struct Refinement {
  double dcx = 0.0;
  double dcy = 0.0;
  double dcz = 0.0;
  double dlog_w = 0.0;
  double dlog_l = 0.0;
  double dlog_h = 0.0;
  double dyaw = 0.0;

  /// Reverses this refinement: negated center and yaw deltas, reciprocal size ratios.
  Refinement inverse() const { return {-dcx, -dcy, -dcz, -dlog_w, -dlog_l, -dlog_h, -dyaw}; }
};

Detection apply_refinement(const Detection& det, const Refinement& refinement);

struct RefinedDetection {
  Detection base;
  double stage2_score = 0.0;
  double fused_score = 0.0;
  Refinement refinement;

  /// The refined detection with the fused score as its confidence.
  Detection output() const;
};

/// Stand-in for the second-stage MLP: maps a proposal and its 5 * F feature
/// vector to a confidence in [0, 1] and a box refinement.
class SecondStageScorer {
 public:
  virtual ~SecondStageScorer() = default;

  struct Output {
    double score = 0.0;
    Refinement refinement;
  };
  virtual Output evaluate(const Detection& proposal, std::span<const double> features) const = 0;
};

/// Scores each proposal with the IoU-guided target of its best 3D IoU
/// against the known ground truth. Refinement is zero.
class OracleScorer final : public SecondStageScorer {
 public:
  explicit OracleScorer(std::vector<Box3D> ground_truth) : ground_truth_(std::move(ground_truth)) {}
  Output evaluate(const Detection& proposal, std::span<const double> features) const override;

 private:
  std::vector<Box3D> ground_truth_;
};

/// Fixed random linear projection followed by a logistic squash. Weights
/// come from Rng(seed) as standard normals scaled by 1/sqrt(dim). Only
/// useful for exercising the plumbing.
class RandomProjectionScorer final : public SecondStageScorer {
 public:
  RandomProjectionScorer(std::size_t feature_dim, std::uint64_t seed);
  Output evaluate(const Detection& proposal, std::span<const double> features) const override;

 private:
  std::vector<double> weights_;
  double bias_;
};

/// Runs the second stage on every proposal. Output is sorted by fused score
/// descending (stable). Class ids are never changed.
std::vector<RefinedDetection> refine_detections(std::span<const Detection> proposals,
                                                const FeatureMap& features,
                                                const SecondStageScorer& scorer);

}  // namespace centertrack

#endif  // CENTERTRACK_REFINE_HPP_
