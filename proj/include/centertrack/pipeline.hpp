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
/// \brief File-level pipeline stages behind the command-line subcommands.
///
/// Each stage reads and writes the paths named in RunConfig::paths (relative
/// paths resolve against out_dir) and returns a JSON summary. Errors surface
/// as the exception types in errors.hpp.
#ifndef CENTERTRACK_PIPELINE_HPP_
#define CENTERTRACK_PIPELINE_HPP_

#include "centertrack/config.hpp"
#include "centertrack/io.hpp"

namespace centertrack {

/// Scenario -> gt, noisy detections and occupancy features.
Json run_simulate(const RunConfig& cfg);

/// gt -> packed target maps.
Json run_encode(const RunConfig& cfg);

/// Packed target maps -> decoded detections (peaks, NMS, top-k).
Json run_decode(const RunConfig& cfg);

/// refine_input detections + features (+ gt for the oracle scorer) -> refined detections.
Json run_refine(const RunConfig& cfg);

/// track_input detections -> tracks. The summary carries per-frame step
/// latency percentiles in milliseconds. Frames must have strictly ascending
/// frame_index (SequenceError otherwise).
Json run_track(const RunConfig& cfg);

/// Detection and tracking metrics against gt; also written to paths.report.
Json run_eval(const RunConfig& cfg);

/// Randomized gradient checks and pinned loss values.
Json run_losses_check(const RunConfig& cfg);

}  // namespace centertrack

#endif  // CENTERTRACK_PIPELINE_HPP_
