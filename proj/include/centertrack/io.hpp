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
/// \brief On-disk formats.
///
/// Frame files are JSON Lines, one frame per line:
///
///   ground truth  {"frame_index", "objects": [{"box", "class_id", "velocity", "object_id"}]}
///   detections    {"frame_index", "detections": [{"box", "class_id", "score", "velocity"
///                                                 [, "stage2_score", "fused_score"]}]}
///   tracks        {"frame_index", "tracks": [{"id", "class_id", "box", "velocity", "score", "age"}]}
///
/// with box = {"cx", "cy", "cz", "w", "l", "h", "yaw"} and velocity = [vx, vy].
///
/// Feature map files hold a sequence of records. Each record is one JSON
/// header line followed by W * L * F little-endian float32 values in
/// row-major [x][y][channel] order.
#ifndef CENTERTRACK_IO_HPP_
#define CENTERTRACK_IO_HPP_

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "centertrack/frames.hpp"
#include "centertrack/grid.hpp"
#include "centertrack/targets.hpp"

namespace centertrack {

using Json = nlohmann::ordered_json;

Json to_json(const Box3D& box);
Box3D box_from_json(const Json& j);
Json to_json(const GridSpec& spec);
GridSpec grid_from_json(const Json& j);

Json to_json(const GtFrame& frame);
Json to_json(const DetectionFrame& frame);
Json to_json(const TrackFrame& frame);
GtFrame gt_frame_from_json(const Json& j);
DetectionFrame detection_frame_from_json(const Json& j);
TrackFrame track_frame_from_json(const Json& j);

/// JSONL writers emit exactly one line per frame.
void write_jsonl(std::ostream& out, std::span<const GtFrame> frames);
void write_jsonl(std::ostream& out, std::span<const DetectionFrame> frames);
void write_jsonl(std::ostream& out, std::span<const TrackFrame> frames);

/// Readers skip blank lines and throw ParseError naming the 1-based line.
std::vector<GtFrame> read_gt_jsonl(std::istream& in);
std::vector<DetectionFrame> read_detections_jsonl(std::istream& in);
std::vector<TrackFrame> read_tracks_jsonl(std::istream& in);

/// File variants; open failures throw IoError.
void save_jsonl(const std::filesystem::path& path, std::span<const GtFrame> frames);
void save_jsonl(const std::filesystem::path& path, std::span<const DetectionFrame> frames);
void save_jsonl(const std::filesystem::path& path, std::span<const TrackFrame> frames);
std::vector<GtFrame> load_gt_jsonl(const std::filesystem::path& path);
std::vector<DetectionFrame> load_detections_jsonl(const std::filesystem::path& path);
std::vector<TrackFrame> load_tracks_jsonl(const std::filesystem::path& path);

struct FeatureRecord {
  std::int64_t frame_index = 0;
  std::vector<std::string> channel_names;
  FeatureMap map;
};

void write_feature_record(std::ostream& out, const FeatureRecord& record);
/// Returns nullopt at a clean end of stream; throws ParseError on a
/// malformed header or truncated payload.
std::optional<FeatureRecord> read_feature_record(std::istream& in);

void save_feature_records(const std::filesystem::path& path, std::span<const FeatureRecord> records);
std::vector<FeatureRecord> load_feature_records(const std::filesystem::path& path);

/// Appends records to a file one at a time.
class FeatureRecordWriter {
 public:
  explicit FeatureRecordWriter(std::filesystem::path path);
  void write(const FeatureRecord& record);
  /// Flushes; throws IoError if any write failed.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Reads records one at a time; errors name the file and record number.
class FeatureRecordReader {
 public:
  explicit FeatureRecordReader(std::filesystem::path path);
  std::optional<FeatureRecord> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t count_ = 0;
};

/// TargetMaps as one K + 11 channel map: heatmap(K), offset(2), height,
/// log_size(3), rot(2), vel(2), valid mask.
FeatureRecord pack_target_maps(const TargetMaps& maps, std::int64_t frame_index);
TargetMaps unpack_target_maps(const FeatureRecord& record);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace centertrack

#endif  // CENTERTRACK_IO_HPP_
