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
/// \brief Greedy center tracking with velocity back-projection.
#ifndef CENTERTRACK_TRACKER_HPP_
#define CENTERTRACK_TRACKER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "centertrack/decode.hpp"
#include "centertrack/geometry.hpp"

namespace centertrack {

struct Track {
  Vec2 center;
  Vec2 velocity;
  int class_id = 0;
  /// Last associated box (center kept in sync with `center` while coasting) and score.
  Box3D box;
  double score = 0.0;
  std::uint64_t id = 0;
  /// Frames since the last match; 0 for active tracks.
  int age = 0;

  friend bool operator==(const Track&, const Track&) = default;
};

inline constexpr int kDefaultMaxAge = 3;
inline constexpr double kVehicleMatchDistance = 4.0;
inline constexpr double kPedestrianMatchDistance = 1.0;

struct TrackerConfig {
  /// Matching distance per class id, meters.
  std::vector<double> class_thresholds;
  /// Frames an unmatched track may coast before it is dropped.
  int max_age = kDefaultMaxAge;

  /// Throws std::invalid_argument on a non-positive threshold or negative age.
  void validate() const;
};

/// Row-major N x M matrix of distances.
struct CostMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

/// F[i][j] = |(det_i.center - det_i.velocity) - track_j.center|, +inf when
/// the classes differ.
CostMatrix cost_matrix(std::span<const Detection> dets, std::span<const Track> tracks);

/**
 * One tracking session. Each step() consumes the detections of the next
 * frame:
 *
 *  1. detections are visited in descending score (stable for ties);
 *  2. each takes the nearest not-yet-matched previous track (lowest index on
 *     ties) and inherits its id when the distance is within its class
 *     threshold, otherwise it starts a new track with a fresh id;
 *  3. unmatched previous tracks with age < max_age survive with age + 1 and
 *     their center advanced by their last velocity; the rest are dropped.
 *
 * The returned set lists the detection tracks in visiting order followed by
 * the coasting tracks in their previous order. Ids start at 1 and are never
 * reused.
 */
class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  const std::vector<Track>& step(std::span<const Detection> dets);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  std::uint64_t next_id() const { return next_id_; }

 private:
  double threshold(int class_id) const;

  TrackerConfig config_;
  std::vector<Track> tracks_;
  std::uint64_t next_id_ = 1;
};

}  // namespace centertrack

#endif  // CENTERTRACK_TRACKER_HPP_
