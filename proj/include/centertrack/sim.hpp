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
/// \brief Synthetic scenes, a noisy detector model and an occupancy encoder
/// standing in for a learned backbone.
#ifndef CENTERTRACK_SIM_HPP_
#define CENTERTRACK_SIM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "centertrack/frames.hpp"
#include "centertrack/grid.hpp"

namespace centertrack {

struct Region {
  double x_min = -50.0;
  double x_max = 50.0;
  double y_min = -50.0;
  double y_max = 50.0;
};

/// Box size prior: w, l, h = mean * exp(log_std * z), z standard normal.
struct SizePrior {
  std::array<double, 3> mean{1.0, 1.0, 1.0};
  std::array<double, 3> log_std{0.0, 0.0, 0.0};
};

struct ClassSpec {
  std::string name;
  SizePrior size;
  /// Tracker association distance for this class, meters.
  double match_threshold = 4.0;
};

enum class MotionType { kConstantVelocity, kConstantTurn };

struct MotionModel {
  MotionType type = MotionType::kConstantVelocity;
  /// Per-frame displacement for constant velocity.
  Vec2 velocity;
  /// Per-frame travel along the heading for constant turn.
  double speed = 0.0;
  /// Heading change per frame for constant turn, radians.
  double turn_rate = 0.0;
};

/// A scripted object. Present for spawn_frame <= t < despawn_frame.
struct ObjectSpec {
  int class_id = 0;
  Vec2 start;
  double yaw = 0.0;
  /// Explicit (w, l, h); falls back to the class prior mean.
  std::optional<std::array<double, 3>> size;
  MotionModel motion;
  int spawn_frame = 0;
  std::optional<int> despawn_frame;
};

/// Objects drawn from the class priors, alive for the whole sequence.
struct RandomObjects {
  std::size_t count = 0;
  /// Distance kept from the region border at spawn, meters.
  double margin = 5.0;
  double speed_min = 0.0;
  double speed_max = 1.0;
  /// Fraction of objects that follow a constant-turn path.
  double turn_fraction = 0.0;
  double turn_rate_max = 0.05;
};

struct NoiseModel {
  double center_sigma = 0.0;
  /// Applied to log sizes.
  double size_sigma = 0.0;
  double yaw_sigma = 0.0;
  double velocity_sigma = 0.0;
  double miss_probability = 0.0;
  /// Expected false positives per frame (Poisson).
  double false_positive_rate = 0.0;
  double tp_score_mean = 1.0;
  double tp_score_sigma = 0.0;
  double fp_score_min = 0.05;
  double fp_score_max = 0.3;

  void validate() const;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  int num_frames = 0;
  Region region;
  std::vector<ClassSpec> classes;
  std::vector<ObjectSpec> objects;
  RandomObjects random;

  /// Throws ConfigError.
  void validate() const;
};

/**
 * Ground-truth sequence. Object ids are 1-based in declaration order
 * (scripted objects first, then random ones). An object's velocity at every
 * frame after its first equals center(t) - center(t-1) exactly; at its first
 * frame it holds the nominal displacement of its motion model. A turning
 * object has yaw(t) = yaw0 + turn_rate * (t - spawn) and moves along that
 * heading. Box centers sit on the ground: cz = h / 2. Objects keep moving
 * while their center is outside the region but are only reported inside it
 * (x_min <= cx < x_max, y_min <= cy < y_max).
 */
std::vector<GtFrame> generate_scenario(const ScenarioConfig& cfg);

/**
 * Noisy detector. Every ground-truth object consumes the same number of
 * draws (miss, center, size, yaw, velocity, score) whether or not it is
 * dropped, so runs that differ only in noise magnitudes stay aligned
 * draw-for-draw. False positives are uniform in `region` with class-prior
 * mean sizes, zero velocity and uniform scores in [fp_score_min, fp_score_max].
 */
std::vector<DetectionFrame> perturb_detections(std::span<const GtFrame> gts, const NoiseModel& noise,
                                               std::span<const ClassSpec> classes,
                                               const Region& region, std::uint64_t seed);

struct OccupancyOptions {
  std::size_t points_per_object = 64;
  /// Ground points scattered uniformly over the grid range.
  std::size_t clutter_points = 0;
  std::uint64_t seed = 0;
};

/// Channels of the occupancy feature map.
enum OccupancyChannel : std::size_t {
  kPointCount = 0,
  kMeanHeight = 1,
  kMaxHeight = 2,
  kMeanReflectance = 3,
  kOccupancyChannels = 4,
};

struct OccupancyResult {
  FeatureMap map;
  /// Points that landed inside the grid and were binned.
  std::size_t points = 0;
};

/// Samples points uniformly inside every box (plus clutter) and bins them
/// into per-cell count, mean height, max height and mean reflectance.
/// Empty cells stay all-zero.
OccupancyResult sample_points_and_encode(const GtFrame& frame, const GridSpec& spec,
                                         const OccupancyOptions& options);

}  // namespace centertrack

#endif  // CENTERTRACK_SIM_HPP_
