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

#include "centertrack/sim.hpp"

#include <algorithm>
#include <cmath>

#include "centertrack/errors.hpp"
#include "centertrack/random.hpp"

namespace centertrack {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Seeds for independent streams derived from one user seed.
constexpr std::uint64_t kScenarioStream = 0x5ce4a1105ce4a110ULL;
constexpr std::uint64_t kOccupancyStream = 0x0cc09a4c70cc09a4ULL;

struct ObjectState {
  std::int64_t id;
  ObjectSpec spec;
  Box3D box;
  Vec2 nominal_step;
};

Vec2 step_of(const MotionModel& motion, double yaw) {
  if (motion.type == MotionType::kConstantVelocity) return motion.velocity;
  return {motion.speed * std::cos(yaw), motion.speed * std::sin(yaw)};
}

}  // namespace

void NoiseModel::validate() const {
  require(center_sigma >= 0.0 && size_sigma >= 0.0 && yaw_sigma >= 0.0 && velocity_sigma >= 0.0 &&
              tp_score_sigma >= 0.0,
          "noise: standard deviations must be non-negative");
  require(is_probability(miss_probability), "noise: miss_probability must lie in [0, 1]");
  require(false_positive_rate >= 0.0, "noise: false_positive_rate must be non-negative");
  require(is_probability(tp_score_mean), "noise: tp_score_mean must lie in [0, 1]");
  require(is_probability(fp_score_min) && is_probability(fp_score_max) && fp_score_min <= fp_score_max,
          "noise: fp score range must be an interval inside [0, 1]");
}

void ScenarioConfig::validate() const {
  require(num_frames >= 0, "scenario: num_frames must be non-negative");
  require(region.x_max > region.x_min && region.y_max > region.y_min, "scenario: empty region");
  require(!classes.empty() || (objects.empty() && random.count == 0),
          "scenario: objects require at least one class");
  for (const ClassSpec& c : classes) {
    for (std::size_t k = 0; k < 3; ++k) {
      require(c.size.mean[k] > 0.0, "scenario: class '" + c.name + "' size mean must be positive");
      require(c.size.log_std[k] >= 0.0, "scenario: class '" + c.name + "' size std must be non-negative");
    }
  }
  for (const ObjectSpec& o : objects) {
    require(o.class_id >= 0 && static_cast<std::size_t>(o.class_id) < classes.size(),
            "scenario: object class_id out of range");
    if (o.size) {
      for (const double s : *o.size) require(s > 0.0, "scenario: object sizes must be positive");
    }
    require(o.spawn_frame >= 0, "scenario: spawn_frame must be non-negative");
    require(!o.despawn_frame || *o.despawn_frame >= o.spawn_frame,
            "scenario: despawn_frame precedes spawn_frame");
  }
  require(random.speed_min >= 0.0 && random.speed_max >= random.speed_min,
          "scenario: random speed range must be a non-negative interval");
  require(is_probability(random.turn_fraction), "scenario: turn_fraction must lie in [0, 1]");
  require(random.turn_rate_max >= 0.0, "scenario: turn_rate_max must be non-negative");
  require(random.margin >= 0.0 && 2.0 * random.margin < region.x_max - region.x_min &&
              2.0 * random.margin < region.y_max - region.y_min,
          "scenario: margin leaves no room to spawn objects");
}

std::vector<GtFrame> generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed ^ kScenarioStream);

  std::vector<ObjectState> states;
  std::int64_t next_id = 1;
  for (const ObjectSpec& spec : cfg.objects) {
    const std::array<double, 3> size =
        spec.size.value_or(cfg.classes[static_cast<std::size_t>(spec.class_id)].size.mean);
    const Box3D box(spec.start.x, spec.start.y, 0.5 * size[2], size[0], size[1], size[2], spec.yaw);
    states.push_back({next_id++, spec, box, step_of(spec.motion, box.yaw)});
  }
  for (std::size_t k = 0; k < cfg.random.count; ++k) {
    ObjectSpec spec;
    spec.class_id = static_cast<int>(rng.below(cfg.classes.size()));
    const ClassSpec& cls = cfg.classes[static_cast<std::size_t>(spec.class_id)];
    const Region& r = cfg.region;
    const double m = cfg.random.margin;
    spec.start = {rng.uniform(r.x_min + m, r.x_max - m), rng.uniform(r.y_min + m, r.y_max - m)};
    spec.yaw = rng.uniform(-kPi, kPi);
    std::array<double, 3> size{};
    for (std::size_t d = 0; d < 3; ++d) size[d] = cls.size.mean[d] * std::exp(cls.size.log_std[d] * rng.normal());
    spec.size = size;
    const double speed = rng.uniform(cfg.random.speed_min, cfg.random.speed_max);
    const bool turning = rng.bernoulli(cfg.random.turn_fraction);
    const double turn = rng.uniform(-cfg.random.turn_rate_max, cfg.random.turn_rate_max);
    if (turning) {
      spec.motion = {MotionType::kConstantTurn, {}, speed, turn};
    } else {
      spec.motion = {MotionType::kConstantVelocity,
                     {speed * std::cos(spec.yaw), speed * std::sin(spec.yaw)}, 0.0, 0.0};
    }
    const Box3D box(spec.start.x, spec.start.y, 0.5 * size[2], size[0], size[1], size[2], spec.yaw);
    states.push_back({next_id++, spec, box, step_of(spec.motion, box.yaw)});
  }

  std::vector<GtFrame> frames;
  frames.reserve(static_cast<std::size_t>(cfg.num_frames));
  for (int t = 0; t < cfg.num_frames; ++t) {
    GtFrame frame{t, {}};
    for (ObjectState& s : states) {
      if (t < s.spec.spawn_frame) continue;
      if (s.spec.despawn_frame && t >= *s.spec.despawn_frame) continue;
      Vec2 velocity = s.nominal_step;
      if (t > s.spec.spawn_frame) {
        const double yaw = s.spec.motion.type == MotionType::kConstantTurn
                               ? s.spec.yaw + s.spec.motion.turn_rate * (t - s.spec.spawn_frame)
                               : s.box.yaw;
        const Vec2 step = step_of(s.spec.motion, yaw);
        const Vec2 prev = s.box.center();
        s.box = Box3D(prev.x + step.x, prev.y + step.y, s.box.cz, s.box.w, s.box.l, s.box.h, yaw);
        velocity = {s.box.cx - prev.x, s.box.cy - prev.y};
      }
      const Region& r = cfg.region;
      if (s.box.cx < r.x_min || s.box.cx >= r.x_max || s.box.cy < r.y_min || s.box.cy >= r.y_max) continue;
      frame.objects.push_back({s.box, s.spec.class_id, velocity, s.id});
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<DetectionFrame> perturb_detections(std::span<const GtFrame> gts, const NoiseModel& noise,
                                               std::span<const ClassSpec> classes,
                                               const Region& region, std::uint64_t seed) {
  noise.validate();
  Rng rng(seed);
  std::vector<DetectionFrame> out;
  out.reserve(gts.size());
  for (const GtFrame& gt : gts) {
    DetectionFrame frame{gt.frame_index, {}, {}};
    for (const AnnotatedObject& o : gt.objects) {
      const double u_miss = rng.uniform();
      const double nx = rng.normal();
      const double ny = rng.normal();
      const double nw = rng.normal();
      const double nl = rng.normal();
      const double nh = rng.normal();
      const double nyaw = rng.normal();
      const double nvx = rng.normal();
      const double nvy = rng.normal();
      const double nscore = rng.normal();
      if (u_miss < noise.miss_probability) continue;

      const Box3D& b = o.box;
      const Box3D box(b.cx + noise.center_sigma * nx, b.cy + noise.center_sigma * ny, b.cz,
                      b.w * std::exp(noise.size_sigma * nw), b.l * std::exp(noise.size_sigma * nl),
                      b.h * std::exp(noise.size_sigma * nh), b.yaw + noise.yaw_sigma * nyaw);
      const double score = std::clamp(noise.tp_score_mean + noise.tp_score_sigma * nscore, 0.0, 1.0);
      const Vec2 vel{o.velocity.x + noise.velocity_sigma * nvx, o.velocity.y + noise.velocity_sigma * nvy};
      frame.detections.push_back({box, o.class_id, score, vel});
    }

    const std::uint64_t num_fp = classes.empty() ? 0 : rng.poisson(noise.false_positive_rate);
    for (std::uint64_t k = 0; k < num_fp; ++k) {
      const auto cls = static_cast<std::size_t>(rng.below(classes.size()));
      const double x = rng.uniform(region.x_min, region.x_max);
      const double y = rng.uniform(region.y_min, region.y_max);
      const double yaw = rng.uniform(-kPi, kPi);
      const double score = rng.uniform(noise.fp_score_min, noise.fp_score_max);
      const auto& mean = classes[cls].size.mean;
      frame.detections.push_back({Box3D(x, y, 0.5 * mean[2], mean[0], mean[1], mean[2], yaw),
                                  static_cast<int>(cls), score, {0.0, 0.0}});
    }
    out.push_back(std::move(frame));
  }
  return out;
}

OccupancyResult sample_points_and_encode(const GtFrame& frame, const GridSpec& spec,
                                         const OccupancyOptions& options) {
  Rng rng(options.seed ^ kOccupancyStream ^ static_cast<std::uint64_t>(frame.frame_index));
  const std::size_t n = spec.num_cells();
  std::vector<double> count(n, 0.0);
  std::vector<double> height_sum(n, 0.0);
  std::vector<double> height_max(n, 0.0);
  std::vector<double> refl_sum(n, 0.0);
  std::size_t binned = 0;

  const auto bin = [&](double x, double y, double z, double reflectance) {
    const CellIndex c = cell_of(spec, x, y);
    if (!cell_in_bounds(spec, c)) return;
    const std::size_t k = static_cast<std::size_t>(c.ix) * spec.num_y() + static_cast<std::size_t>(c.iy);
    height_max[k] = count[k] == 0.0 ? z : std::max(height_max[k], z);
    count[k] += 1.0;
    height_sum[k] += z;
    refl_sum[k] += reflectance;
    ++binned;
  };

  for (const AnnotatedObject& o : frame.objects) {
    const Box3D& b = o.box;
    const double c = std::cos(b.yaw);
    const double s = std::sin(b.yaw);
    for (std::size_t p = 0; p < options.points_per_object; ++p) {
      const double u = rng.uniform(-0.5 * b.l, 0.5 * b.l);
      const double v = rng.uniform(-0.5 * b.w, 0.5 * b.w);
      const double z = rng.uniform(b.bottom(), b.top());
      const double reflectance = rng.uniform();
      bin(b.cx + c * u - s * v, b.cy + s * u + c * v, z, reflectance);
    }
  }
  for (std::size_t p = 0; p < options.clutter_points; ++p) {
    const double x = rng.uniform(spec.x_min(), spec.x_max());
    const double y = rng.uniform(spec.y_min(), spec.y_max());
    const double z = rng.uniform(-0.1, 0.1);
    const double reflectance = rng.uniform(0.0, 0.2);
    bin(x, y, z, reflectance);
  }

  FeatureMap map(spec, kOccupancyChannels);
  for (std::size_t ix = 0; ix < spec.num_x(); ++ix) {
    for (std::size_t iy = 0; iy < spec.num_y(); ++iy) {
      const std::size_t k = ix * spec.num_y() + iy;
      if (count[k] == 0.0) continue;
      map.at(ix, iy, kPointCount) = count[k];
      map.at(ix, iy, kMeanHeight) = height_sum[k] / count[k];
      map.at(ix, iy, kMaxHeight) = height_max[k];
      map.at(ix, iy, kMeanReflectance) = refl_sum[k] / count[k];
    }
  }
  return {std::move(map), binned};
}

}  // namespace centertrack
