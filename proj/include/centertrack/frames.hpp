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

#ifndef CENTERTRACK_FRAMES_HPP_
#define CENTERTRACK_FRAMES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "centertrack/decode.hpp"
#include "centertrack/refine.hpp"
#include "centertrack/targets.hpp"
#include "centertrack/tracker.hpp"

namespace centertrack {

struct GtFrame {
  std::int64_t frame_index = 0;
  std::vector<AnnotatedObject> objects;

  friend bool operator==(const GtFrame&, const GtFrame&) = default;
};

/// Second-stage scores carried alongside a detection when it went through refine.
struct StageScores {
  double stage2_score = 0.0;
  double fused_score = 0.0;

  friend bool operator==(const StageScores&, const StageScores&) = default;
};

struct DetectionFrame {
  std::int64_t frame_index = 0;
  std::vector<Detection> detections;
  /// Empty, or one entry per detection.
  std::vector<StageScores> stage_scores;

  friend bool operator==(const DetectionFrame&, const DetectionFrame&) = default;
};

struct TrackFrame {
  std::int64_t frame_index = 0;
  std::vector<Track> tracks;

  friend bool operator==(const TrackFrame&, const TrackFrame&) = default;
};

}  // namespace centertrack

#endif  // CENTERTRACK_FRAMES_HPP_
