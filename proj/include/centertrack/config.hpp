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
/// \brief The single JSON run configuration shared by every pipeline stage.
#ifndef CENTERTRACK_CONFIG_HPP_
#define CENTERTRACK_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "centertrack/decode.hpp"
#include "centertrack/geometry.hpp"
#include "centertrack/grid.hpp"
#include "centertrack/io.hpp"
#include "centertrack/losses.hpp"
#include "centertrack/metrics.hpp"
#include "centertrack/sim.hpp"
#include "centertrack/targets.hpp"
#include "centertrack/tracker.hpp"

namespace centertrack {

struct DecodeConfig {
  double score_floor = kDefaultScoreFloor;
  std::size_t max_peaks = 1000;
  double nms_iou = kDefaultNmsIou;
  std::size_t top_k = kDefaultTopK;
};

enum class ScorerKind { kOracle, kRandomProjection };

struct RefineConfig {
  ScorerKind scorer = ScorerKind::kOracle;
  std::uint64_t seed = 0;
  std::size_t points_per_object = 64;
  std::size_t clutter_points = 0;
};

struct MetricsConfig {
  std::vector<double> ap_thresholds = kDefaultApThresholds;
  double mot_threshold = 2.0;
};

struct LossCheckConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  double step = 1e-5;
  double rel_tolerance = 1e-4;
  double focal_alpha = kFocalAlpha;
  double focal_beta = kFocalBeta;
  LossWeights weights;
};

struct PathsConfig {
  std::filesystem::path out_dir = ".";
  std::filesystem::path gt = "gt.jsonl";
  std::filesystem::path detections = "detections.jsonl";
  std::filesystem::path features = "features.bin";
  std::filesystem::path targets = "targets.bin";
  std::filesystem::path decoded = "decoded.jsonl";
  std::filesystem::path refine_input = "detections.jsonl";
  std::filesystem::path refined = "refined.jsonl";
  std::filesystem::path track_input = "refined.jsonl";
  std::filesystem::path tracks = "tracks.jsonl";
  /// Empty disables the detection part of the report.
  std::filesystem::path eval_detections = "refined.jsonl";
  /// Empty disables the tracking part of the report.
  std::filesystem::path eval_tracks = "tracks.jsonl";
  std::filesystem::path report = "report.json";
  /// When non-empty, eval writes <prefix><class name>.csv PR curves.
  std::string pr_curve_prefix;

  /// Relative paths resolve against out_dir.
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/**
 * Every knob of a run. Missing keys take the defaults below; unknown keys
 * and inconsistent values raise ConfigError. The scenario's region is the
 * grid range.
 */
struct RunConfig {
  GridSpec grid{-51.2, 51.2, -51.2, 51.2, 0.8};
  std::vector<ClassSpec> classes;
  RenderOptions targets;
  DecodeConfig decode;
  RefineConfig refine;
  int max_age = kDefaultMaxAge;
  MetricsConfig metrics;
  LossCheckConfig losses;
  ScenarioConfig scenario;
  NoiseModel noise;
  std::uint64_t noise_seed = 0;
  PathsConfig paths;

  RunConfig();

  std::size_t num_classes() const { return classes.size(); }
  TrackerConfig tracker_config() const;
  Region region() const;
  /// Throws ConfigError.
  void validate() const;
};

RunConfig run_config_from_json(const Json& j);
Json to_json(const RunConfig& cfg);

/// Applies "a.b.c=value" overrides in order. The value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_overrides(Json& j, const std::vector<std::string>& assignments);

/// Reads the config file (IoError when unreadable, ConfigError when not
/// valid JSON), applies overrides and validates.
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

const char* scorer_name(ScorerKind kind);

}  // namespace centertrack

#endif  // CENTERTRACK_CONFIG_HPP_
