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
/// \brief Center-distance average precision and CLEAR-MOT tracking metrics.
#ifndef CENTERTRACK_METRICS_HPP_
#define CENTERTRACK_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "centertrack/errors.hpp"
#include "centertrack/frames.hpp"
#include "centertrack/tracker.hpp"

namespace centertrack {

inline const std::vector<double> kDefaultApThresholds{0.5, 1.0, 2.0, 4.0};

struct PrPoint {
  double score = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

struct ApResult {
  /// Unset when there is no ground truth of the class.
  std::optional<double> ap;
  std::size_t num_gt = 0;
  std::size_t num_detections = 0;
  /// One point per detection in descending score order.
  std::vector<PrPoint> curve;
};

/**
 * Average precision for one class at one center-distance threshold.
 *
 * Detections of the class are visited in descending score (ties by frame
 * then input order); each claims the closest unmatched ground truth of the
 * class in its frame when that distance is strictly below the threshold.
 * AP is the step integral over recall of the precision envelope
 * (max precision at any recall >= r), without a minimum-recall cut.
 *
 * Frames must be aligned: equal length and equal frame_index sequence;
 * otherwise SequenceError.
 */
ApResult detection_ap(std::span<const DetectionFrame> dets, std::span<const GtFrame> gts,
                      int class_id, double dist_threshold);

/// Same as detection_ap on precomputed precision/recall points.
double average_precision(std::span<const PrPoint> curve);

struct DetectionEvalResult {
  std::vector<double> thresholds;
  /// per_class[class_id][k] is the AP at thresholds[k].
  std::map<int, std::vector<ApResult>> per_class;
  /// Mean over every defined (class, threshold) AP; unset if none is defined.
  std::optional<double> mean_ap;
  /// Mean over classes at one threshold.
  std::vector<std::optional<double>> mean_ap_per_threshold;
};

DetectionEvalResult evaluate_detections(std::span<const DetectionFrame> dets,
                                        std::span<const GtFrame> gts, int num_classes,
                                        std::span<const double> thresholds = kDefaultApThresholds);

enum class AssignmentMethod { kAuto, kExhaustive, kHungarian };

/// Above this many rows or columns kAuto switches from exhaustive search to Hungarian.
inline constexpr std::size_t kExhaustiveAssignmentLimit = 8;

/**
 * Minimum-distance assignment restricted to pairs with cost <= threshold.
 * Maximizes the number of pairs first, then minimizes their summed cost.
 * Returns (row, col) pairs sorted by row.
 */
std::vector<std::pair<std::size_t, std::size_t>> optimal_assignment(
    const CostMatrix& cost, double threshold, AssignmentMethod method = AssignmentMethod::kAuto);

struct MotCounts {
  std::size_t gt = 0;
  std::size_t matches = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ids = 0;
  double distance_sum = 0.0;

  MotCounts& operator+=(const MotCounts& o);
  /// 1 - (FP + FN + IDS) / GT; unset when GT == 0.
  std::optional<double> mota() const;
  /// Mean matched center distance; unset without matches.
  std::optional<double> motp() const;

  friend bool operator==(const MotCounts&, const MotCounts&) = default;
};

struct MotResult {
  MotCounts totals;
  std::map<int, MotCounts> per_class;

  std::optional<double> mota() const { return totals.mota(); }
  std::optional<double> motp() const { return totals.motp(); }
};

/**
 * CLEAR-MOT over one sequence, class by class. Only active tracks (age 0)
 * count as hypotheses. Per frame, a ground truth keeps its previous-frame
 * hypothesis while that hypothesis is present and within `dist_threshold`;
 * the remaining pairs are matched by optimal_assignment(). A ground truth
 * whose matched track id differs from its last matched id counts one
 * identity switch.
 */
MotResult clear_mot(std::span<const TrackFrame> tracks, std::span<const GtFrame> gts,
                    double dist_threshold, AssignmentMethod method = AssignmentMethod::kAuto);

/// Throws SequenceError unless both sequences list the same frame indices in order.
template <typename A, typename B>
void require_aligned(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) {
    throw SequenceError("frame count mismatch: " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].frame_index != b[i].frame_index) {
      throw SequenceError("frame index mismatch at position " + std::to_string(i) + ": " +
                          std::to_string(a[i].frame_index) + " vs " +
                          std::to_string(b[i].frame_index));
    }
  }
}

}  // namespace centertrack

#endif  // CENTERTRACK_METRICS_HPP_
