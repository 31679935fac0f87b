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

#include "centertrack/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "centertrack/errors.hpp"

namespace centertrack {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// Strict view over one JSON object: every key must be consumed before finish().
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j.is_object(), path_ + ": expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const Json* get(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string where(const char* key) const { return path_ + "." + key; }

  void number(const char* key, double& out) {
    if (const Json* v = get(key)) {
      require(v->is_number(), where(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
  void integer(const char* key, Int& out) {
    if (const Json* v = get(key)) {
      require(v->is_number_integer(), where(key) + ": expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        require(v->is_number_unsigned() || v->get<std::int64_t>() >= 0, where(key) + ": must be non-negative");
      }
      out = v->get<Int>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const Json* v = get(key)) {
      require(v->is_string(), where(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  void path(const char* key, std::filesystem::path& out) {
    std::string s = out.string();
    string(key, s);
    out = s;
  }

  template <std::size_t N>
  void triple(const char* key, std::array<double, N>& out) {
    if (const Json* v = get(key)) {
      require(v->is_array() && v->size() == N, where(key) + ": expected " + std::to_string(N) + " numbers");
      for (std::size_t i = 0; i < N; ++i) {
        require((*v)[i].is_number(), where(key) + ": expected numbers");
        out[i] = (*v)[i].get<double>();
      }
    }
  }

  void vec2(const char* key, Vec2& out) {
    std::array<double, 2> a{out.x, out.y};
    triple(key, a);
    out = {a[0], a[1]};
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      require(seen_.count(it.key()) > 0, path_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ClassSpec class_from_json(const Json& j, const std::string& where) {
  Section s(j, where);
  ClassSpec c;
  s.string("name", c.name);
  s.number("match_threshold", c.match_threshold);
  s.triple("size_mean", c.size.mean);
  s.triple("size_log_std", c.size.log_std);
  s.finish();
  require(!c.name.empty(), where + ".name: required");
  return c;
}

MotionModel motion_from_json(const Json& j, const std::string& where) {
  Section s(j, where);
  MotionModel m;
  std::string type = "constant_velocity";
  s.string("type", type);
  if (type == "constant_velocity") {
    m.type = MotionType::kConstantVelocity;
    s.vec2("velocity", m.velocity);
  } else if (type == "constant_turn") {
    m.type = MotionType::kConstantTurn;
    s.number("speed", m.speed);
    s.number("turn_rate", m.turn_rate);
  } else {
    throw ConfigError(where + ".type: expected 'constant_velocity' or 'constant_turn'");
  }
  s.finish();
  return m;
}

ObjectSpec object_from_json(const Json& j, const std::string& where) {
  Section s(j, where);
  ObjectSpec o;
  s.integer("class_id", o.class_id);
  s.vec2("start", o.start);
  s.number("yaw", o.yaw);
  if (s.has("size")) {
    std::array<double, 3> size{};
    s.triple("size", size);
    o.size = size;
  }
  if (const Json* m = s.get("motion")) o.motion = motion_from_json(*m, where + ".motion");
  s.integer("spawn_frame", o.spawn_frame);
  if (s.has("despawn_frame")) {
    int d = 0;
    s.integer("despawn_frame", d);
    o.despawn_frame = d;
  }
  s.finish();
  return o;
}

Json class_to_json(const ClassSpec& c) {
  return Json{{"name", c.name},
              {"match_threshold", c.match_threshold},
              {"size_mean", c.size.mean},
              {"size_log_std", c.size.log_std}};
}

Json object_to_json(const ObjectSpec& o) {
  Json j{{"class_id", o.class_id}, {"start", Json::array({o.start.x, o.start.y})}, {"yaw", o.yaw}};
  if (o.size) j["size"] = *o.size;
  if (o.motion.type == MotionType::kConstantVelocity) {
    j["motion"] = Json{{"type", "constant_velocity"},
                       {"velocity", Json::array({o.motion.velocity.x, o.motion.velocity.y})}};
  } else {
    j["motion"] = Json{{"type", "constant_turn"}, {"speed", o.motion.speed}, {"turn_rate", o.motion.turn_rate}};
  }
  j["spawn_frame"] = o.spawn_frame;
  if (o.despawn_frame) j["despawn_frame"] = *o.despawn_frame;
  return j;
}

void set_path(Json& root, const std::string& dotted, Json value) {
  Json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    require(!key.empty(), "--set: empty key segment in '" + dotted + "'");
    require(node->is_object(), "--set: '" + dotted + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    if (!node->contains(key)) (*node)[key] = Json::object();
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

std::filesystem::path PathsConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : out_dir / p;
}

RunConfig::RunConfig() {
  classes = {
      {"car", {{1.9, 4.6, 1.7}, {0.05, 0.08, 0.05}}, kVehicleMatchDistance},
      {"pedestrian", {{0.7, 0.7, 1.75}, {0.1, 0.1, 0.05}}, kPedestrianMatchDistance},
  };
  scenario.num_frames = 100;
  scenario.random.count = 20;
  scenario.random.speed_min = 0.0;
  scenario.random.speed_max = 1.0;
  scenario.random.turn_fraction = 0.3;
  noise.center_sigma = 0.1;
  noise.size_sigma = 0.02;
  noise.yaw_sigma = 0.02;
  noise.velocity_sigma = 0.05;
  noise.miss_probability = 0.05;
  noise.false_positive_rate = 1.0;
  noise.tp_score_mean = 0.8;
  noise.tp_score_sigma = 0.1;
}

TrackerConfig RunConfig::tracker_config() const {
  TrackerConfig t;
  for (const ClassSpec& c : classes) t.class_thresholds.push_back(c.match_threshold);
  t.max_age = max_age;
  return t;
}

Region RunConfig::region() const {
  return {grid.x_min(), grid.x_max(), grid.y_min(), grid.y_max()};
}

void RunConfig::validate() const {
  require(!classes.empty(), "classes: at least one class is required");
  std::set<std::string> names;
  for (const ClassSpec& c : classes) {
    require(names.insert(c.name).second, "classes: duplicate name '" + c.name + "'");
    require(c.match_threshold > 0.0, "classes." + c.name + ".match_threshold: must be positive");
  }
  require(targets.min_overlap > 0.0 && targets.min_overlap < 1.0, "targets.min_overlap: must lie in (0, 1)");
  require(targets.min_radius > 0.0, "targets.min_radius: must be positive");
  require(decode.score_floor >= 0.0 && decode.score_floor <= 1.0, "decode.score_floor: must lie in [0, 1]");
  require(decode.max_peaks >= 1, "decode.max_peaks: must be at least 1");
  require(decode.nms_iou > 0.0 && decode.nms_iou < 1.0, "decode.nms_iou: must lie in (0, 1)");
  require(decode.top_k >= 1, "decode.top_k: must be at least 1");
  require(max_age >= 0, "tracker.max_age: must be non-negative");
  require(!metrics.ap_thresholds.empty(), "metrics.ap_thresholds: must not be empty");
  for (const double t : metrics.ap_thresholds) require(t > 0.0, "metrics.ap_thresholds: must be positive");
  require(metrics.mot_threshold > 0.0, "metrics.mot_threshold: must be positive");
  require(losses.trials >= 1, "losses.trials: must be at least 1");
  require(losses.step > 0.0, "losses.step: must be positive");
  require(losses.rel_tolerance > 0.0, "losses.rel_tolerance: must be positive");
  ScenarioConfig sc = scenario;
  sc.region = region();
  sc.classes = classes;
  sc.validate();
  noise.validate();
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  Section root(j, "config");

  if (const Json* g = root.get("grid")) {
    Section s(*g, "grid");
    double x_min = cfg.grid.x_min(), x_max = cfg.grid.x_max(), y_min = cfg.grid.y_min(),
           y_max = cfg.grid.y_max(), cell = cfg.grid.cell();
    s.number("x_min", x_min);
    s.number("x_max", x_max);
    s.number("y_min", y_min);
    s.number("y_max", y_max);
    s.number("cell", cell);
    s.finish();
    try {
      cfg.grid = GridSpec(x_min, x_max, y_min, y_max, cell);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }

  if (const Json* c = root.get("classes")) {
    require(c->is_array(), "classes: expected an array");
    cfg.classes.clear();
    for (std::size_t i = 0; i < c->size(); ++i) {
      cfg.classes.push_back(class_from_json((*c)[i], "classes[" + std::to_string(i) + "]"));
    }
  }

  if (const Json* t = root.get("targets")) {
    Section s(*t, "targets");
    s.number("min_overlap", cfg.targets.min_overlap);
    s.number("min_radius", cfg.targets.min_radius);
    s.finish();
  }

  if (const Json* d = root.get("decode")) {
    Section s(*d, "decode");
    s.number("score_floor", cfg.decode.score_floor);
    s.integer("max_peaks", cfg.decode.max_peaks);
    s.number("nms_iou", cfg.decode.nms_iou);
    s.integer("top_k", cfg.decode.top_k);
    s.finish();
  }

  if (const Json* r = root.get("refine")) {
    Section s(*r, "refine");
    std::string scorer = scorer_name(cfg.refine.scorer);
    s.string("scorer", scorer);
    if (scorer == "oracle") {
      cfg.refine.scorer = ScorerKind::kOracle;
    } else if (scorer == "random_projection") {
      cfg.refine.scorer = ScorerKind::kRandomProjection;
    } else {
      throw ConfigError("refine.scorer: expected 'oracle' or 'random_projection'");
    }
    s.integer("seed", cfg.refine.seed);
    s.integer("points_per_object", cfg.refine.points_per_object);
    s.integer("clutter_points", cfg.refine.clutter_points);
    s.finish();
  }

  if (const Json* t = root.get("tracker")) {
    Section s(*t, "tracker");
    s.integer("max_age", cfg.max_age);
    s.finish();
  }

  if (const Json* m = root.get("metrics")) {
    Section s(*m, "metrics");
    if (const Json* th = s.get("ap_thresholds")) {
      require(th->is_array(), "metrics.ap_thresholds: expected an array");
      cfg.metrics.ap_thresholds.clear();
      for (const Json& v : *th) {
        require(v.is_number(), "metrics.ap_thresholds: expected numbers");
        cfg.metrics.ap_thresholds.push_back(v.get<double>());
      }
    }
    s.number("mot_threshold", cfg.metrics.mot_threshold);
    s.finish();
  }

  if (const Json* l = root.get("losses")) {
    Section s(*l, "losses");
    s.integer("seed", cfg.losses.seed);
    s.integer("trials", cfg.losses.trials);
    s.number("step", cfg.losses.step);
    s.number("rel_tolerance", cfg.losses.rel_tolerance);
    s.number("focal_alpha", cfg.losses.focal_alpha);
    s.number("focal_beta", cfg.losses.focal_beta);
    s.number("heatmap_weight", cfg.losses.weights.heatmap);
    s.number("regression_weight", cfg.losses.weights.regression);
    s.finish();
  }

  if (const Json* sc = root.get("scenario")) {
    Section s(*sc, "scenario");
    s.integer("seed", cfg.scenario.seed);
    s.integer("num_frames", cfg.scenario.num_frames);
    if (const Json* objs = s.get("objects")) {
      require(objs->is_array(), "scenario.objects: expected an array");
      for (std::size_t i = 0; i < objs->size(); ++i) {
        cfg.scenario.objects.push_back(object_from_json((*objs)[i], "scenario.objects[" + std::to_string(i) + "]"));
      }
    }
    if (const Json* r = s.get("random")) {
      Section rs(*r, "scenario.random");
      rs.integer("count", cfg.scenario.random.count);
      rs.number("margin", cfg.scenario.random.margin);
      rs.number("speed_min", cfg.scenario.random.speed_min);
      rs.number("speed_max", cfg.scenario.random.speed_max);
      rs.number("turn_fraction", cfg.scenario.random.turn_fraction);
      rs.number("turn_rate_max", cfg.scenario.random.turn_rate_max);
      rs.finish();
    }
    s.finish();
  }

  if (const Json* n = root.get("noise")) {
    Section s(*n, "noise");
    s.integer("seed", cfg.noise_seed);
    s.number("center_sigma", cfg.noise.center_sigma);
    s.number("size_sigma", cfg.noise.size_sigma);
    s.number("yaw_sigma", cfg.noise.yaw_sigma);
    s.number("velocity_sigma", cfg.noise.velocity_sigma);
    s.number("miss_probability", cfg.noise.miss_probability);
    s.number("false_positive_rate", cfg.noise.false_positive_rate);
    s.number("tp_score_mean", cfg.noise.tp_score_mean);
    s.number("tp_score_sigma", cfg.noise.tp_score_sigma);
    s.number("fp_score_min", cfg.noise.fp_score_min);
    s.number("fp_score_max", cfg.noise.fp_score_max);
    s.finish();
  }

  if (const Json* p = root.get("paths")) {
    Section s(*p, "paths");
    PathsConfig& paths = cfg.paths;
    s.path("out_dir", paths.out_dir);
    s.path("gt", paths.gt);
    s.path("detections", paths.detections);
    s.path("features", paths.features);
    s.path("targets", paths.targets);
    s.path("decoded", paths.decoded);
    s.path("refine_input", paths.refine_input);
    s.path("refined", paths.refined);
    s.path("track_input", paths.track_input);
    s.path("tracks", paths.tracks);
    s.path("eval_detections", paths.eval_detections);
    s.path("eval_tracks", paths.eval_tracks);
    s.path("report", paths.report);
    s.string("pr_curve_prefix", paths.pr_curve_prefix);
    s.finish();
  }

  root.finish();
  cfg.validate();
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json classes = Json::array();
  for (const ClassSpec& c : cfg.classes) classes.push_back(class_to_json(c));
  Json objects = Json::array();
  for (const ObjectSpec& o : cfg.scenario.objects) objects.push_back(object_to_json(o));
  const auto& r = cfg.scenario.random;
  const auto& n = cfg.noise;
  const auto& p = cfg.paths;
  return Json{
      {"grid", to_json(cfg.grid)},
      {"classes", std::move(classes)},
      {"targets", {{"min_overlap", cfg.targets.min_overlap}, {"min_radius", cfg.targets.min_radius}}},
      {"decode",
       {{"score_floor", cfg.decode.score_floor},
        {"max_peaks", cfg.decode.max_peaks},
        {"nms_iou", cfg.decode.nms_iou},
        {"top_k", cfg.decode.top_k}}},
      {"refine",
       {{"scorer", scorer_name(cfg.refine.scorer)},
        {"seed", cfg.refine.seed},
        {"points_per_object", cfg.refine.points_per_object},
        {"clutter_points", cfg.refine.clutter_points}}},
      {"tracker", {{"max_age", cfg.max_age}}},
      {"metrics", {{"ap_thresholds", cfg.metrics.ap_thresholds}, {"mot_threshold", cfg.metrics.mot_threshold}}},
      {"losses",
       {{"seed", cfg.losses.seed},
        {"trials", cfg.losses.trials},
        {"step", cfg.losses.step},
        {"rel_tolerance", cfg.losses.rel_tolerance},
        {"focal_alpha", cfg.losses.focal_alpha},
        {"focal_beta", cfg.losses.focal_beta},
        {"heatmap_weight", cfg.losses.weights.heatmap},
        {"regression_weight", cfg.losses.weights.regression}}},
      {"scenario",
       {{"seed", cfg.scenario.seed},
        {"num_frames", cfg.scenario.num_frames},
        {"objects", std::move(objects)},
        {"random",
         {{"count", r.count},
          {"margin", r.margin},
          {"speed_min", r.speed_min},
          {"speed_max", r.speed_max},
          {"turn_fraction", r.turn_fraction},
          {"turn_rate_max", r.turn_rate_max}}}}},
      {"noise",
       {{"seed", cfg.noise_seed},
        {"center_sigma", n.center_sigma},
        {"size_sigma", n.size_sigma},
        {"yaw_sigma", n.yaw_sigma},
        {"velocity_sigma", n.velocity_sigma},
        {"miss_probability", n.miss_probability},
        {"false_positive_rate", n.false_positive_rate},
        {"tp_score_mean", n.tp_score_mean},
        {"tp_score_sigma", n.tp_score_sigma},
        {"fp_score_min", n.fp_score_min},
        {"fp_score_max", n.fp_score_max}}},
      {"paths",
       {{"out_dir", p.out_dir.string()},
        {"gt", p.gt.string()},
        {"detections", p.detections.string()},
        {"features", p.features.string()},
        {"targets", p.targets.string()},
        {"decoded", p.decoded.string()},
        {"refine_input", p.refine_input.string()},
        {"refined", p.refined.string()},
        {"track_input", p.track_input.string()},
        {"tracks", p.tracks.string()},
        {"eval_detections", p.eval_detections.string()},
        {"eval_tracks", p.eval_tracks.string()},
        {"report", p.report.string()},
        {"pr_curve_prefix", p.pr_curve_prefix}}},
  };
}

void apply_overrides(Json& j, const std::vector<std::string>& assignments) {
  for (const std::string& a : assignments) {
    const std::size_t eq = a.find('=');
    require(eq != std::string::npos && eq > 0, "--set: expected key=value, got '" + a + "'");
    const std::string key = a.substr(0, eq);
    const std::string raw = a.substr(eq + 1);
    Json value = Json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;
    set_path(j, key, std::move(value));
  }
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  require(!j.is_discarded(), "config '" + path.string() + "' is not valid JSON");
  apply_overrides(j, overrides);
  try {
    return run_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

const char* scorer_name(ScorerKind kind) {
  return kind == ScorerKind::kOracle ? "oracle" : "random_projection";
}

}  // namespace centertrack
