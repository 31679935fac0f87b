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
/// \brief First-stage inference: heatmap peaks to world-frame detections.
#ifndef CENTERTRACK_DECODE_HPP_
#define CENTERTRACK_DECODE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "centertrack/geometry.hpp"
#include "centertrack/grid.hpp"
#include "centertrack/targets.hpp"

namespace centertrack {

struct Detection {
  Box3D box;
  int class_id = 0;
  double score = 0.0;
  /// Meters per frame interval.
  Vec2 velocity;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct Peak {
  std::size_t ix = 0;
  std::size_t iy = 0;
  int class_id = 0;
  double value = 0.0;

  friend bool operator==(const Peak&, const Peak&) = default;
};

inline constexpr double kDefaultScoreFloor = 0.1;
inline constexpr std::size_t kDefaultTopK = 500;

/// Cells strictly greater than every in-grid 8-neighbor of the same channel
/// with value >= score_floor. Sorted by value descending, ties by
/// (class_id, ix, iy) ascending, then truncated to max_peaks.
std::vector<Peak> extract_peaks(const FeatureMap& heatmap, std::size_t max_peaks,
                                double score_floor = kDefaultScoreFloor);

struct DecodeResult {
  std::vector<Detection> detections;
  /// Peaks dropped because a regression channel was not finite.
  std::size_t dropped_non_finite = 0;
};

/// Gathers regression channels at every peak and assembles boxes in world
/// coordinates. Rotation channels need not be normalized.
DecodeResult decode_detections(const TargetMaps& maps, std::size_t max_peaks,
                               double score_floor = kDefaultScoreFloor);

/// Class-wise rotated NMS followed by truncation to the k best.
std::vector<Detection> select_top(std::span<const Detection> dets, double nms_iou = kDefaultNmsIou,
                                  std::size_t k = kDefaultTopK);

}  // namespace centertrack

#endif  // CENTERTRACK_DECODE_HPP_
