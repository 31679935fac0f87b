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
/// \brief First-stage training targets and the second-stage proposal sampler.
#ifndef CENTERTRACK_TARGETS_HPP_
#define CENTERTRACK_TARGETS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "centertrack/geometry.hpp"
#include "centertrack/grid.hpp"

namespace centertrack {

struct AnnotatedObject {
  Box3D box;
  int class_id = 0;
  /// Displacement since the previous frame, meters per frame interval.
  Vec2 velocity;
  std::int64_t object_id = 0;

  friend bool operator==(const AnnotatedObject&, const AnnotatedObject&) = default;
};

inline constexpr double kMinGaussianRadius = 2.0;
inline constexpr double kDefaultMinOverlap = 0.1;

/**
 * Size-adaptive Gaussian radius in cells: max(f(l, w), min_radius).
 *
 * f is the corner-keypoint radius: the smallest of three radii r such that a
 * box whose corners are displaced by r from the true (axis-aligned l x w)
 * box still reaches IoU >= min_overlap. The three cases are a translated
 * box, a box shrunk inwards by r on every side, and a box grown outwards by
 * r on every side; each radius is the boundary root of its IoU constraint.
 */
double gaussian_radius(double l_cells, double w_cells, double min_overlap,
                       double min_radius = kMinGaussianRadius);

/// The three per-case radii before taking the minimum; exposed for testing.
struct CornerRadii {
  double translated;
  double shrunk;
  double grown;
};
CornerRadii corner_radii(double l_cells, double w_cells, double min_overlap);

/// Dense first-stage maps. All channels share one GridSpec.
struct TargetMaps {
  FeatureMap heatmap;   // K
  FeatureMap offset;    // 2, cells
  FeatureMap height;    // 1, meters
  FeatureMap log_size;  // 3: ln w, ln l, ln h
  FeatureMap rot;       // 2: sin yaw, cos yaw
  FeatureMap vel;       // 2, meters per frame
  std::vector<std::uint8_t> valid_mask;  // W x L, row-major

  TargetMaps(const GridSpec& spec, std::size_t num_classes);

  const GridSpec& spec() const { return heatmap.spec(); }
  std::size_t num_classes() const { return heatmap.channels(); }
  bool valid(std::size_t ix, std::size_t iy) const {
    return valid_mask[ix * spec().num_y() + iy] != 0;
  }

  friend bool operator==(const TargetMaps&, const TargetMaps&) = default;
};

/// Number of regression channels stored per cell (offset, height, size, rot, vel).
inline constexpr std::size_t kRegressionChannels = 10;

struct CenterCollision {
  std::int64_t overwritten_object_id;
  std::int64_t winning_object_id;
  CellIndex cell;
};

struct RenderReport {
  std::size_t rendered = 0;
  std::size_t skipped_out_of_range = 0;
  /// Cells written by Gaussian splats, summed over objects.
  std::size_t splat_cells = 0;
  std::vector<CenterCollision> collisions;
};

struct RenderOptions {
  double min_overlap = kDefaultMinOverlap;
  double min_radius = kMinGaussianRadius;
};

/// Splats one truncated Gaussian per in-range object into its class channel;
/// overlapping splats combine by element-wise max.
FeatureMap render_heatmap(std::span<const AnnotatedObject> objects, const GridSpec& spec,
                          std::size_t num_classes, const RenderOptions& options = {},
                          RenderReport* report = nullptr);

/// Writes regression channels and the valid mask at every object's center
/// cell. On a center-cell collision the later object wins and the collision
/// is recorded in `report`.
void render_regression(std::span<const AnnotatedObject> objects, TargetMaps& maps,
                       RenderReport* report = nullptr);

/// Heatmap plus regression channels.
TargetMaps render_targets(std::span<const AnnotatedObject> objects, const GridSpec& spec,
                          std::size_t num_classes, const RenderOptions& options = {},
                          RenderReport* report = nullptr);

inline constexpr double kDefaultPositiveIou = 0.55;
inline constexpr std::size_t kDefaultProposalSamples = 128;

struct ProposalSample {
  std::size_t proposal_index;
  Box3D proposal;
  bool positive;
  /// Index into the ground-truth list of the best-overlapping object (positives only).
  std::optional<std::size_t> matched_gt;
};

/**
 * Draws up to `n` proposals aiming for n/2 positives and n/2 negatives.
 * A proposal is positive iff its best 3D IoU against the ground truth reaches
 * `pos_iou`. A short side is filled from the other. Positives are returned
 * first, each group in draw order.
 *
 * Throws std::invalid_argument on an empty proposal list or odd `n`.
 */
std::vector<ProposalSample> sample_proposals(std::span<const Box3D> proposals,
                                             std::span<const AnnotatedObject> gts, std::size_t n,
                                             double pos_iou, std::uint64_t seed);

}  // namespace centertrack

#endif  // CENTERTRACK_TARGETS_HPP_
