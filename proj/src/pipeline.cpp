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

#include "centertrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <cmath>
#include <set>
#include <sstream>

#include "centertrack/errors.hpp"
#include "centertrack/gradcheck.hpp"
#include "centertrack/refine.hpp"

namespace centertrack {
namespace {

const std::vector<std::string> kOccupancyNames{"point_count", "mean_height", "max_height",
                                               "mean_reflectance"};

ScenarioConfig scenario_of(const RunConfig& cfg) {
  ScenarioConfig sc = cfg.scenario;
  sc.region = cfg.region();
  sc.classes = cfg.classes;
  return sc;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string threshold_key(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

void require_grid(const FeatureRecord& r, const GridSpec& spec, const std::string& what) {
  if (!(r.map.spec() == spec)) {
    throw ConfigError(what + ": grid in file does not match the configured grid");
  }
}

double percentile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json mot_json(const MotCounts& c) {
  return Json{{"mota", optional_json(c.mota())}, {"motp", optional_json(c.motp())},
              {"gt", c.gt},                      {"matches", c.matches},
              {"fp", c.fp},                      {"fn", c.fn},
              {"ids", c.ids}};
}

}  // namespace

Json run_simulate(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  const std::vector<GtFrame> gts = generate_scenario(scenario_of(cfg));
  const std::vector<DetectionFrame> dets =
      perturb_detections(gts, cfg.noise, cfg.classes, cfg.region(), cfg.noise_seed);
  save_jsonl(p.resolve(p.gt), std::span<const GtFrame>(gts));
  save_jsonl(p.resolve(p.detections), std::span<const DetectionFrame>(dets));

  FeatureRecordWriter features(p.resolve(p.features));
  const OccupancyOptions occ{cfg.refine.points_per_object, cfg.refine.clutter_points, cfg.refine.seed};
  std::set<std::int64_t> ids;
  std::size_t instances = 0, detections = 0, points = 0;
  for (const GtFrame& f : gts) {
    for (const AnnotatedObject& o : f.objects) ids.insert(o.object_id);
    instances += f.objects.size();
    OccupancyResult r = sample_points_and_encode(f, cfg.grid, occ);
    points += r.points;
    features.write({f.frame_index, kOccupancyNames, std::move(r.map)});
  }
  features.close();
  for (const DetectionFrame& f : dets) detections += f.detections.size();

  return Json{{"command", "simulate"},  {"frames", gts.size()},        {"objects", ids.size()},
              {"instances", instances}, {"detections", detections},    {"points", points},
              {"seed", cfg.scenario.seed}, {"noise_seed", cfg.noise_seed}};
}

Json run_encode(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  const std::vector<GtFrame> gts = load_gt_jsonl(p.resolve(p.gt));
  FeatureRecordWriter out(p.resolve(p.targets));
  RenderReport total;
  std::size_t objects = 0, collisions = 0;
  for (const GtFrame& f : gts) {
    for (const AnnotatedObject& o : f.objects) {
      if (o.class_id < 0 || static_cast<std::size_t>(o.class_id) >= cfg.num_classes()) {
        throw ConfigError("gt frame " + std::to_string(f.frame_index) + ": class_id " +
                          std::to_string(o.class_id) + " is not configured");
      }
    }
    RenderReport report;
    const TargetMaps maps = render_targets(f.objects, cfg.grid, cfg.num_classes(), cfg.targets, &report);
    out.write(pack_target_maps(maps, f.frame_index));
    objects += f.objects.size();
    total.rendered += report.rendered;
    total.skipped_out_of_range += report.skipped_out_of_range;
    total.splat_cells += report.splat_cells;
    collisions += report.collisions.size();
  }
  out.close();
  return Json{{"command", "encode"},
              {"frames", gts.size()},
              {"objects", objects},
              {"rendered", total.rendered},
              {"skipped_out_of_range", total.skipped_out_of_range},
              {"splat_cells", total.splat_cells},
              {"collisions", collisions}};
}

Json run_decode(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  FeatureRecordReader in(p.resolve(p.targets));
  std::vector<DetectionFrame> frames;
  std::size_t detections = 0, dropped = 0;
  while (auto record = in.next()) {
    require_grid(*record, cfg.grid, "decode");
    const TargetMaps maps = unpack_target_maps(*record);
    if (maps.num_classes() != cfg.num_classes()) {
      throw ConfigError("decode: target file has " + std::to_string(maps.num_classes()) +
                        " classes, config has " + std::to_string(cfg.num_classes()));
    }
    DecodeResult r = decode_detections(maps, cfg.decode.max_peaks, cfg.decode.score_floor);
    dropped += r.dropped_non_finite;
    DetectionFrame f{record->frame_index, select_top(r.detections, cfg.decode.nms_iou, cfg.decode.top_k), {}};
    detections += f.detections.size();
    frames.push_back(std::move(f));
  }
  save_jsonl(p.resolve(p.decoded), std::span<const DetectionFrame>(frames));
  return Json{{"command", "decode"},
              {"frames", frames.size()},
              {"detections", detections},
              {"dropped_non_finite", dropped}};
}

Json run_refine(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  const std::vector<DetectionFrame> input = load_detections_jsonl(p.resolve(p.refine_input));
  std::vector<GtFrame> gts;
  if (cfg.refine.scorer == ScorerKind::kOracle) {
    gts = load_gt_jsonl(p.resolve(p.gt));
    require_aligned(std::span<const DetectionFrame>(input), std::span<const GtFrame>(gts));
  }
  FeatureRecordReader features(p.resolve(p.features));
  std::vector<DetectionFrame> out;
  out.reserve(input.size());
  std::size_t detections = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    auto record = features.next();
    if (!record) throw SequenceError("refine: feature file ends before frame " + std::to_string(input[i].frame_index));
    if (record->frame_index != input[i].frame_index) {
      throw SequenceError("refine: feature frame " + std::to_string(record->frame_index) +
                          " does not match detection frame " + std::to_string(input[i].frame_index));
    }
    require_grid(*record, cfg.grid, "refine");

    std::unique_ptr<SecondStageScorer> scorer;
    if (cfg.refine.scorer == ScorerKind::kOracle) {
      std::vector<Box3D> boxes;
      for (const AnnotatedObject& o : gts[i].objects) boxes.push_back(o.box);
      scorer = std::make_unique<OracleScorer>(std::move(boxes));
    } else {
      scorer = std::make_unique<RandomProjectionScorer>(kSurfacePoints * record->map.channels(), cfg.refine.seed);
    }
    const std::vector<RefinedDetection> refined = refine_detections(input[i].detections, record->map, *scorer);
    DetectionFrame f{input[i].frame_index, {}, {}};
    for (const RefinedDetection& r : refined) {
      f.detections.push_back(r.output());
      f.stage_scores.push_back({r.stage2_score, r.fused_score});
    }
    detections += f.detections.size();
    out.push_back(std::move(f));
  }
  save_jsonl(p.resolve(p.refined), std::span<const DetectionFrame>(out));
  return Json{{"command", "refine"},
              {"frames", out.size()},
              {"detections", detections},
              {"scorer", scorer_name(cfg.refine.scorer)}};
}

Json run_track(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  const std::vector<DetectionFrame> input = load_detections_jsonl(p.resolve(p.track_input));
  for (std::size_t i = 1; i < input.size(); ++i) {
    if (input[i].frame_index <= input[i - 1].frame_index) {
      throw SequenceError("track: frame_index " + std::to_string(input[i].frame_index) + " follows " +
                          std::to_string(input[i - 1].frame_index));
    }
  }
  Tracker tracker(cfg.tracker_config());
  std::vector<TrackFrame> out;
  out.reserve(input.size());
  std::vector<double> latency_ms;
  latency_ms.reserve(input.size());
  for (const DetectionFrame& f : input) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Track>& tracks = tracker.step(f.detections);
    const auto t1 = std::chrono::steady_clock::now();
    latency_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    out.push_back({f.frame_index, tracks});
  }
  save_jsonl(p.resolve(p.tracks), std::span<const TrackFrame>(out));

  double mean = 0.0;
  for (const double v : latency_ms) mean += v;
  if (!latency_ms.empty()) mean /= static_cast<double>(latency_ms.size());
  return Json{{"command", "track"},
              {"frames", out.size()},
              {"track_ids", tracker.next_id() - 1},
              {"latency_ms",
               {{"p50", percentile(latency_ms, 0.5)},
                {"p99", percentile(latency_ms, 0.99)},
                {"mean", mean},
                {"max", latency_ms.empty() ? 0.0 : *std::max_element(latency_ms.begin(), latency_ms.end())}}}};
}

Json run_eval(const RunConfig& cfg) {
  const PathsConfig& p = cfg.paths;
  const std::vector<GtFrame> gts = load_gt_jsonl(p.resolve(p.gt));
  Json report{{"map", nullptr}, {"per_class", Json::object()}, {"mota", nullptr}, {"motp", nullptr},
              {"fp", nullptr},  {"fn", nullptr},               {"ids", nullptr}};
  Json per_class = Json::object();
  for (const ClassSpec& c : cfg.classes) per_class[c.name] = Json::object();

  if (!p.eval_detections.empty()) {
    const std::vector<DetectionFrame> dets = load_detections_jsonl(p.resolve(p.eval_detections));
    require_aligned(std::span<const DetectionFrame>(dets), std::span<const GtFrame>(gts));
    const DetectionEvalResult r = evaluate_detections(dets, gts, static_cast<int>(cfg.num_classes()),
                                                      cfg.metrics.ap_thresholds);
    report["map"] = optional_json(r.mean_ap);
    Json by_threshold = Json::object();
    for (std::size_t t = 0; t < r.thresholds.size(); ++t) {
      by_threshold[threshold_key(r.thresholds[t])] = optional_json(r.mean_ap_per_threshold[t]);
    }
    report["map_per_threshold"] = std::move(by_threshold);
    for (const auto& [cls, results] : r.per_class) {
      const std::string& name = cfg.classes[static_cast<std::size_t>(cls)].name;
      Json ap = Json::object();
      for (std::size_t t = 0; t < results.size(); ++t) ap[threshold_key(r.thresholds[t])] = optional_json(results[t].ap);
      per_class[name]["ap"] = std::move(ap);
      per_class[name]["num_gt"] = results.empty() ? 0 : results.front().num_gt;
      per_class[name]["num_detections"] = results.empty() ? 0 : results.front().num_detections;
      if (!p.pr_curve_prefix.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "threshold,score,precision,recall\n";
        for (std::size_t t = 0; t < results.size(); ++t) {
          for (const PrPoint& pt : results[t].curve) {
            csv << r.thresholds[t] << ',' << pt.score << ',' << pt.precision << ',' << pt.recall << '\n';
          }
        }
        write_text_file(p.resolve(p.pr_curve_prefix + name + ".csv"), csv.str());
      }
    }
  }

  if (!p.eval_tracks.empty()) {
    const std::vector<TrackFrame> tracks = load_tracks_jsonl(p.resolve(p.eval_tracks));
    require_aligned(std::span<const TrackFrame>(tracks), std::span<const GtFrame>(gts));
    const MotResult r = clear_mot(tracks, gts, cfg.metrics.mot_threshold);
    report["mota"] = optional_json(r.mota());
    report["motp"] = optional_json(r.motp());
    report["fp"] = r.totals.fp;
    report["fn"] = r.totals.fn;
    report["ids"] = r.totals.ids;
    report["gt"] = r.totals.gt;
    report["matches"] = r.totals.matches;
    for (const auto& [cls, counts] : r.per_class) {
      if (cls < 0 || static_cast<std::size_t>(cls) >= cfg.num_classes()) continue;
      per_class[cfg.classes[static_cast<std::size_t>(cls)].name]["mot"] = mot_json(counts);
    }
  }

  report["per_class"] = std::move(per_class);
  write_text_file(p.resolve(p.report), report.dump(2) + "\n");
  return report;
}

Json run_losses_check(const RunConfig& cfg) {
  const LossCheckConfig& l = cfg.losses;
  const LossCheckReport r =
      run_loss_checks({l.seed, l.trials, l.step, l.rel_tolerance, l.focal_alpha, l.focal_beta});
  const auto summary = [](const LossCheckSummary& s) {
    return Json{{"trials", s.trials},
                {"failures", s.failures},
                {"worst_relative_error", s.worst_relative_error},
                {"passed", s.passed()}};
  };
  const std::vector<double> half{0.5}, one{1.0};
  return Json{{"command", "losses-check"},
              {"step", l.step},
              {"rel_tolerance", l.rel_tolerance},
              {"focal", summary(r.focal)},
              {"l1", summary(r.l1)},
              {"bce", summary(r.bce)},
              {"pinned",
               {{"focal_single_positive_at_half", focal_loss(half, one, l.focal_alpha, l.focal_beta).value},
                {"bce_at_half_half", score_bce(0.5, 0.5).value}}},
              {"passed", r.passed()}};
}

}  // namespace centertrack
