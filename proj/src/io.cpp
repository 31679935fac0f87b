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

#include "centertrack/io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "centertrack/errors.hpp"

namespace centertrack {
namespace {

constexpr const char* kFeatureFormat = "centertrack-featuremap";
constexpr int kFeatureVersion = 1;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

template <typename Int>
Int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<Int>();
}

Vec2 vec2(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(std::string("field '") + key + "' must be a 2-element number array");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

const Json& array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  return v;
}

Json vec2_json(const Vec2& v) { return Json::array({v.x, v.y}); }

template <typename Frame, typename Parse>
std::vector<Frame> read_lines(std::istream& in, Parse parse) {
  std::vector<Frame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      frames.push_back(parse(Json::parse(line)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (in.bad()) throw IoError("read failure");
  return frames;
}

template <typename Frame>
void write_lines(std::ostream& out, std::span<const Frame> frames) {
  for (const Frame& f : frames) out << to_json(f).dump() << '\n';
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

template <typename Frame>
std::vector<Frame> with_path(const std::filesystem::path& path,
                             std::vector<Frame> (*reader)(std::istream&)) {
  std::ifstream in = open_in(path);
  try {
    return reader(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void put_f32(std::ostream& out, double value) {
  const auto f = static_cast<float>(value);
  std::uint32_t bits = 0;
  std::memcpy(&bits, &f, sizeof bits);
  const std::array<char, 4> bytes{static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                                  static_cast<char>((bits >> 16) & 0xff),
                                  static_cast<char>((bits >> 24) & 0xff)};
  out.write(bytes.data(), 4);
}

double get_f32(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  float f = 0.0F;
  std::memcpy(&f, &bits, sizeof f);
  return static_cast<double>(f);
}

std::vector<std::string> target_channel_names(std::size_t num_classes) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < num_classes; ++k) names.push_back("heatmap_" + std::to_string(k));
  for (const char* n : {"offset_x", "offset_y", "height", "log_w", "log_l", "log_h", "sin_yaw", "cos_yaw",
                        "vel_x", "vel_y", "valid"}) {
    names.emplace_back(n);
  }
  return names;
}

constexpr std::size_t kPackedExtraChannels = 11;

}  // namespace

Json to_json(const Box3D& b) {
  return Json{{"cx", b.cx}, {"cy", b.cy}, {"cz", b.cz}, {"w", b.w},
              {"l", b.l},   {"h", b.h},   {"yaw", b.yaw}};
}

Box3D box_from_json(const Json& j) {
  return Box3D(number(j, "cx"), number(j, "cy"), number(j, "cz"), number(j, "w"), number(j, "l"),
               number(j, "h"), number(j, "yaw"));
}

Json to_json(const GridSpec& s) {
  return Json{{"x_min", s.x_min()}, {"x_max", s.x_max()}, {"y_min", s.y_min()},
              {"y_max", s.y_max()}, {"cell", s.cell()}};
}

GridSpec grid_from_json(const Json& j) {
  return GridSpec(number(j, "x_min"), number(j, "x_max"), number(j, "y_min"), number(j, "y_max"),
                  number(j, "cell"));
}

Json to_json(const GtFrame& frame) {
  Json objects = Json::array();
  for (const AnnotatedObject& o : frame.objects) {
    objects.push_back(Json{{"box", to_json(o.box)},
                           {"class_id", o.class_id},
                           {"velocity", vec2_json(o.velocity)},
                           {"object_id", o.object_id}});
  }
  return Json{{"frame_index", frame.frame_index}, {"objects", std::move(objects)}};
}

Json to_json(const DetectionFrame& frame) {
  if (!frame.stage_scores.empty() && frame.stage_scores.size() != frame.detections.size()) {
    throw std::invalid_argument("DetectionFrame: stage_scores must be empty or match detections");
  }
  Json dets = Json::array();
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const Detection& d = frame.detections[i];
    Json jd{{"box", to_json(d.box)},
            {"class_id", d.class_id},
            {"score", d.score},
            {"velocity", vec2_json(d.velocity)}};
    if (!frame.stage_scores.empty()) {
      jd["stage2_score"] = frame.stage_scores[i].stage2_score;
      jd["fused_score"] = frame.stage_scores[i].fused_score;
    }
    dets.push_back(std::move(jd));
  }
  return Json{{"frame_index", frame.frame_index}, {"detections", std::move(dets)}};
}

Json to_json(const TrackFrame& frame) {
  Json tracks = Json::array();
  for (const Track& t : frame.tracks) {
    tracks.push_back(Json{{"id", t.id},
                          {"class_id", t.class_id},
                          {"box", to_json(t.box)},
                          {"velocity", vec2_json(t.velocity)},
                          {"score", t.score},
                          {"age", t.age}});
  }
  return Json{{"frame_index", frame.frame_index}, {"tracks", std::move(tracks)}};
}

GtFrame gt_frame_from_json(const Json& j) {
  GtFrame frame{integer<std::int64_t>(j, "frame_index"), {}};
  for (const Json& o : array_field(j, "objects")) {
    frame.objects.push_back({box_from_json(field(o, "box")), integer<int>(o, "class_id"),
                             vec2(o, "velocity"), integer<std::int64_t>(o, "object_id")});
  }
  return frame;
}

DetectionFrame detection_frame_from_json(const Json& j) {
  DetectionFrame frame{integer<std::int64_t>(j, "frame_index"), {}, {}};
  const Json& dets = array_field(j, "detections");
  bool any_stage = false;
  bool all_stage = true;
  for (const Json& d : dets) {
    frame.detections.push_back(
        {box_from_json(field(d, "box")), integer<int>(d, "class_id"), number(d, "score"), vec2(d, "velocity")});
    const bool staged = d.contains("stage2_score") || d.contains("fused_score");
    any_stage = any_stage || staged;
    all_stage = all_stage && staged;
  }
  if (any_stage) {
    if (!all_stage) throw ParseError("stage scores must be present on every detection of a frame or none");
    for (const Json& d : dets) frame.stage_scores.push_back({number(d, "stage2_score"), number(d, "fused_score")});
  }
  return frame;
}

TrackFrame track_frame_from_json(const Json& j) {
  TrackFrame frame{integer<std::int64_t>(j, "frame_index"), {}};
  for (const Json& t : array_field(j, "tracks")) {
    Track track;
    track.id = integer<std::uint64_t>(t, "id");
    track.class_id = integer<int>(t, "class_id");
    track.box = box_from_json(field(t, "box"));
    track.center = track.box.center();
    track.velocity = vec2(t, "velocity");
    track.score = number(t, "score");
    track.age = integer<int>(t, "age");
    frame.tracks.push_back(track);
  }
  return frame;
}

void write_jsonl(std::ostream& out, std::span<const GtFrame> frames) { write_lines(out, frames); }
void write_jsonl(std::ostream& out, std::span<const DetectionFrame> frames) { write_lines(out, frames); }
void write_jsonl(std::ostream& out, std::span<const TrackFrame> frames) { write_lines(out, frames); }

std::vector<GtFrame> read_gt_jsonl(std::istream& in) {
  return read_lines<GtFrame>(in, gt_frame_from_json);
}
std::vector<DetectionFrame> read_detections_jsonl(std::istream& in) {
  return read_lines<DetectionFrame>(in, detection_frame_from_json);
}
std::vector<TrackFrame> read_tracks_jsonl(std::istream& in) {
  return read_lines<TrackFrame>(in, track_frame_from_json);
}

void save_jsonl(const std::filesystem::path& path, std::span<const GtFrame> frames) {
  std::ofstream out = open_out(path);
  write_jsonl(out, frames);
  finish_write(out, path);
}
void save_jsonl(const std::filesystem::path& path, std::span<const DetectionFrame> frames) {
  std::ofstream out = open_out(path);
  write_jsonl(out, frames);
  finish_write(out, path);
}
void save_jsonl(const std::filesystem::path& path, std::span<const TrackFrame> frames) {
  std::ofstream out = open_out(path);
  write_jsonl(out, frames);
  finish_write(out, path);
}

std::vector<GtFrame> load_gt_jsonl(const std::filesystem::path& path) {
  return with_path(path, &read_gt_jsonl);
}
std::vector<DetectionFrame> load_detections_jsonl(const std::filesystem::path& path) {
  return with_path(path, &read_detections_jsonl);
}
std::vector<TrackFrame> load_tracks_jsonl(const std::filesystem::path& path) {
  return with_path(path, &read_tracks_jsonl);
}

void write_feature_record(std::ostream& out, const FeatureRecord& record) {
  const FeatureMap& map = record.map;
  if (!record.channel_names.empty() && record.channel_names.size() != map.channels()) {
    throw std::invalid_argument("FeatureRecord: channel name count does not match channels");
  }
  const Json header{{"format", kFeatureFormat},
                    {"version", kFeatureVersion},
                    {"frame_index", record.frame_index},
                    {"grid", to_json(map.spec())},
                    {"num_x", map.num_x()},
                    {"num_y", map.num_y()},
                    {"channels", map.channels()},
                    {"channel_names", record.channel_names},
                    {"layout", "row_major_x_y_channel"},
                    {"dtype", "float32_le"}};
  out << header.dump() << '\n';
  for (const double v : map.values()) put_f32(out, v);
}

std::optional<FeatureRecord> read_feature_record(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    if (in.bad()) throw IoError("read failure");
    return std::nullopt;
  }
  Json header;
  try {
    header = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("feature record header: ") + e.what());
  }
  try {
    const Json& format = field(header, "format");
    if (!format.is_string() || format.get<std::string>() != kFeatureFormat) {
      throw ParseError("feature record header: unknown format");
    }
    if (integer<int>(header, "version") != kFeatureVersion) {
      throw ParseError("feature record header: unsupported version");
    }
    const Json& dtype = field(header, "dtype");
    const Json& layout = field(header, "layout");
    if (dtype != "float32_le" || layout != "row_major_x_y_channel") {
      throw ParseError("feature record header: unsupported dtype or layout");
    }
    const GridSpec spec = grid_from_json(field(header, "grid"));
    const auto channels = integer<std::size_t>(header, "channels");
    if (integer<std::size_t>(header, "num_x") != spec.num_x() ||
        integer<std::size_t>(header, "num_y") != spec.num_y() || channels == 0) {
      throw ParseError("feature record header: dimensions disagree with grid");
    }
    FeatureRecord record{integer<std::int64_t>(header, "frame_index"),
                         field(header, "channel_names").get<std::vector<std::string>>(),
                         FeatureMap(spec, channels)};
    const std::size_t count = spec.num_cells() * channels;
    std::vector<unsigned char> raw(count * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw ParseError("feature record payload truncated");
    }
    auto values = record.map.values();
    for (std::size_t i = 0; i < count; ++i) values[i] = get_f32(raw.data() + 4 * i);
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("feature record header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("feature record header: ") + e.what());
  }
}

void save_feature_records(const std::filesystem::path& path, std::span<const FeatureRecord> records) {
  std::ofstream out = open_out(path, std::ios::out | std::ios::binary);
  for (const FeatureRecord& r : records) write_feature_record(out, r);
  finish_write(out, path);
}

std::vector<FeatureRecord> load_feature_records(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, std::ios::in | std::ios::binary);
  std::vector<FeatureRecord> out;
  try {
    while (auto r = read_feature_record(in)) out.push_back(std::move(*r));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": record " + std::to_string(out.size()) + ": " + e.what());
  }
  return out;
}

FeatureRecordWriter::FeatureRecordWriter(std::filesystem::path path)
    : path_(std::move(path)), out_(open_out(path_, std::ios::out | std::ios::binary)) {}

void FeatureRecordWriter::write(const FeatureRecord& record) { write_feature_record(out_, record); }

void FeatureRecordWriter::close() { finish_write(out_, path_); }

FeatureRecordReader::FeatureRecordReader(std::filesystem::path path)
    : path_(std::move(path)), in_(open_in(path_, std::ios::in | std::ios::binary)) {}

std::optional<FeatureRecord> FeatureRecordReader::next() {
  try {
    auto r = read_feature_record(in_);
    if (r) ++count_;
    return r;
  } catch (const ParseError& e) {
    throw ParseError(path_.string() + ": record " + std::to_string(count_) + ": " + e.what());
  }
}

FeatureRecord pack_target_maps(const TargetMaps& maps, std::int64_t frame_index) {
  const GridSpec& spec = maps.spec();
  const std::size_t k = maps.num_classes();
  FeatureRecord record{frame_index, target_channel_names(k), FeatureMap(spec, k + kPackedExtraChannels)};
  for (std::size_t ix = 0; ix < spec.num_x(); ++ix) {
    for (std::size_t iy = 0; iy < spec.num_y(); ++iy) {
      auto out = record.map.cell(ix, iy);
      std::size_t c = 0;
      for (const FeatureMap* m : {&maps.heatmap, &maps.offset, &maps.height, &maps.log_size, &maps.rot, &maps.vel}) {
        for (const double v : m->cell(ix, iy)) out[c++] = v;
      }
      out[c] = maps.valid(ix, iy) ? 1.0 : 0.0;
    }
  }
  return record;
}

TargetMaps unpack_target_maps(const FeatureRecord& record) {
  const FeatureMap& packed = record.map;
  if (packed.channels() <= kPackedExtraChannels) {
    throw ParseError("target map record has too few channels");
  }
  const std::size_t k = packed.channels() - kPackedExtraChannels;
  if (record.channel_names != target_channel_names(k)) {
    throw ParseError("target map record has unexpected channel names");
  }
  const GridSpec& spec = packed.spec();
  TargetMaps maps(spec, k);
  for (std::size_t ix = 0; ix < spec.num_x(); ++ix) {
    for (std::size_t iy = 0; iy < spec.num_y(); ++iy) {
      const auto in = packed.cell(ix, iy);
      std::size_t c = 0;
      for (FeatureMap* m : {&maps.heatmap, &maps.offset, &maps.height, &maps.log_size, &maps.rot, &maps.vel}) {
        for (double& v : m->cell(ix, iy)) v = in[c++];
      }
      maps.valid_mask[ix * spec.num_y() + iy] = in[c] != 0.0 ? 1 : 0;
    }
  }
  return maps;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
  finish_write(out, path);
}

}  // namespace centertrack
