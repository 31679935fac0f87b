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

#include "centertrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

namespace centertrack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RankedDetection {
  double score;
  std::size_t frame;
  std::size_t index;
};

}  // namespace

double average_precision(std::span<const PrPoint> curve) {
  // Precision envelope from the right, then step integration over recall.
  std::vector<double> envelope(curve.size());
  double running = 0.0;
  for (std::size_t k = curve.size(); k-- > 0;) {
    running = std::max(running, curve[k].precision);
    envelope[k] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k].recall > prev_recall) {
      ap += (curve[k].recall - prev_recall) * envelope[k];
      prev_recall = curve[k].recall;
    }
  }
  return ap;
}

ApResult detection_ap(std::span<const DetectionFrame> dets, std::span<const GtFrame> gts,
                      int class_id, double dist_threshold) {
  require_aligned(dets, gts);
  ApResult result;

  std::vector<std::vector<const AnnotatedObject*>> frame_gts(gts.size());
  for (std::size_t f = 0; f < gts.size(); ++f) {
    for (const AnnotatedObject& o : gts[f].objects) {
      if (o.class_id == class_id) frame_gts[f].push_back(&o);
    }
    result.num_gt += frame_gts[f].size();
  }

  std::vector<RankedDetection> ranked;
  for (std::size_t f = 0; f < dets.size(); ++f) {
    for (std::size_t i = 0; i < dets[f].detections.size(); ++i) {
      if (dets[f].detections[i].class_id == class_id) {
        ranked.push_back({dets[f].detections[i].score, f, i});
      }
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedDetection& a, const RankedDetection& b) {
    return a.score > b.score;
  });
  result.num_detections = ranked.size();
  if (result.num_gt == 0) return result;

  std::vector<std::vector<bool>> taken(gts.size());
  for (std::size_t f = 0; f < gts.size(); ++f) taken[f].assign(frame_gts[f].size(), false);

  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const RankedDetection& r : ranked) {
    const Box3D& box = dets[r.frame].detections[r.index].box;
    std::size_t best = frame_gts[r.frame].size();
    double best_dist = kInf;
    for (std::size_t g = 0; g < frame_gts[r.frame].size(); ++g) {
      if (taken[r.frame][g]) continue;
      const double d = center_distance_bev(box, frame_gts[r.frame][g]->box);
      if (d < best_dist) {
        best_dist = d;
        best = g;
      }
    }
    if (best < frame_gts[r.frame].size() && best_dist < dist_threshold) {
      taken[r.frame][best] = true;
      ++tp;
    } else {
      ++fp;
    }
    result.curve.push_back({r.score, static_cast<double>(tp) / static_cast<double>(tp + fp),
                            static_cast<double>(tp) / static_cast<double>(result.num_gt)});
  }
  result.ap = average_precision(result.curve);
  return result;
}

DetectionEvalResult evaluate_detections(std::span<const DetectionFrame> dets,
                                        std::span<const GtFrame> gts, int num_classes,
                                        std::span<const double> thresholds) {
  require_aligned(dets, gts);
  DetectionEvalResult out;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.mean_ap_per_threshold.resize(thresholds.size());

  double total = 0.0;
  std::size_t defined = 0;
  std::vector<double> per_thr_sum(thresholds.size(), 0.0);
  std::vector<std::size_t> per_thr_count(thresholds.size(), 0);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<ApResult>& row = out.per_class[c];
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      row.push_back(detection_ap(dets, gts, c, thresholds[k]));
      if (row.back().ap) {
        total += *row.back().ap;
        ++defined;
        per_thr_sum[k] += *row.back().ap;
        ++per_thr_count[k];
      }
    }
  }
  if (defined > 0) out.mean_ap = total / static_cast<double>(defined);
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (per_thr_count[k] > 0) {
      out.mean_ap_per_threshold[k] = per_thr_sum[k] / static_cast<double>(per_thr_count[k]);
    }
  }
  return out;
}

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

struct SearchState {
  const CostMatrix* cost;
  double threshold;
  std::vector<bool> col_used;
  Pairs current;
  double current_sum = 0.0;
  Pairs best;
  double best_sum = kInf;
};

void exhaustive_search(SearchState& s, std::size_t row) {
  if (row == s.cost->rows) {
    if (s.current.size() > s.best.size() ||
        (s.current.size() == s.best.size() && s.current_sum < s.best_sum)) {
      s.best = s.current;
      s.best_sum = s.current_sum;
    }
    return;
  }
  // Upper bound on pairs still reachable prunes branches that cannot win on count.
  const std::size_t remaining = s.cost->rows - row;
  if (s.current.size() + remaining < s.best.size()) return;

  for (std::size_t j = 0; j < s.cost->cols; ++j) {
    const double c = (*s.cost)(row, j);
    if (s.col_used[j] || !(c <= s.threshold)) continue;
    s.col_used[j] = true;
    s.current.emplace_back(row, j);
    s.current_sum += c;
    exhaustive_search(s, row + 1);
    s.current_sum -= c;
    s.current.pop_back();
    s.col_used[j] = false;
  }
  exhaustive_search(s, row + 1);
}

Pairs exhaustive_assignment(const CostMatrix& cost, double threshold) {
  SearchState s{&cost, threshold, std::vector<bool>(cost.cols, false), {}, 0.0, {}, kInf};
  s.best_sum = kInf;
  exhaustive_search(s, 0);
  return s.best;
}

// Kuhn-Munkres with potentials on a square matrix, O(n^3).
std::vector<std::size_t> hungarian_square(const std::vector<double>& a, std::size_t n) {
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

Pairs hungarian_assignment(const CostMatrix& cost, double threshold) {
  const std::size_t n = std::max(cost.rows, cost.cols);
  if (n == 0) return {};
  // Any non-edge costs more than every possible set of real edges, so the
  // optimum maximizes the number of real pairs before minimizing their sum.
  const double big = (std::max(threshold, 0.0) + 1.0) * static_cast<double>(n + 1);
  std::vector<double> square(n * n, big);
  for (std::size_t i = 0; i < cost.rows; ++i) {
    for (std::size_t j = 0; j < cost.cols; ++j) {
      const double c = cost(i, j);
      if (c <= threshold) square[i * n + j] = c;
    }
  }
  const std::vector<std::size_t> row_to_col = hungarian_square(square, n);
  Pairs out;
  for (std::size_t i = 0; i < cost.rows; ++i) {
    const std::size_t j = row_to_col[i];
    if (j < cost.cols && cost(i, j) <= threshold) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> optimal_assignment(const CostMatrix& cost,
                                                                    double threshold,
                                                                    AssignmentMethod method) {
  if (method == AssignmentMethod::kAuto) {
    method = std::max(cost.rows, cost.cols) <= kExhaustiveAssignmentLimit
                 ? AssignmentMethod::kExhaustive
                 : AssignmentMethod::kHungarian;
  }
  return method == AssignmentMethod::kExhaustive ? exhaustive_assignment(cost, threshold)
                                                 : hungarian_assignment(cost, threshold);
}

MotCounts& MotCounts::operator+=(const MotCounts& o) {
  gt += o.gt;
  matches += o.matches;
  fp += o.fp;
  fn += o.fn;
  ids += o.ids;
  distance_sum += o.distance_sum;
  return *this;
}

std::optional<double> MotCounts::mota() const {
  if (gt == 0) return std::nullopt;
  return 1.0 - static_cast<double>(fp + fn + ids) / static_cast<double>(gt);
}

std::optional<double> MotCounts::motp() const {
  if (matches == 0) return std::nullopt;
  return distance_sum / static_cast<double>(matches);
}

namespace {

MotCounts clear_mot_class(std::span<const TrackFrame> tracks, std::span<const GtFrame> gts,
                          int class_id, double threshold, AssignmentMethod method) {
  MotCounts counts;
  std::map<std::int64_t, std::uint64_t> prev_match;  // gt id -> track id, previous frame only
  std::map<std::int64_t, std::uint64_t> last_id;     // gt id -> last matched track id ever

  for (std::size_t f = 0; f < gts.size(); ++f) {
    std::vector<const AnnotatedObject*> objs;
    for (const AnnotatedObject& o : gts[f].objects) {
      if (o.class_id == class_id) objs.push_back(&o);
    }
    std::vector<const Track*> hyps;
    for (const Track& t : tracks[f].tracks) {
      if (t.class_id == class_id && t.age == 0) hyps.push_back(&t);
    }
    counts.gt += objs.size();

    const auto dist = [&](std::size_t g, std::size_t h) {
      return std::hypot(objs[g]->box.cx - hyps[h]->center.x, objs[g]->box.cy - hyps[h]->center.y);
    };

    std::vector<bool> gt_done(objs.size(), false);
    std::vector<bool> hyp_done(hyps.size(), false);
    std::map<std::int64_t, std::uint64_t> cur_match;
    const auto record = [&](std::size_t g, std::size_t h, double d) {
      gt_done[g] = true;
      hyp_done[h] = true;
      ++counts.matches;
      counts.distance_sum += d;
      cur_match[objs[g]->object_id] = hyps[h]->id;
    };

    for (std::size_t g = 0; g < objs.size(); ++g) {
      const auto it = prev_match.find(objs[g]->object_id);
      if (it == prev_match.end()) continue;
      for (std::size_t h = 0; h < hyps.size(); ++h) {
        if (hyp_done[h] || hyps[h]->id != it->second) continue;
        const double d = dist(g, h);
        if (d <= threshold) record(g, h, d);
        break;
      }
    }

    std::vector<std::size_t> open_g;
    std::vector<std::size_t> open_h;
    for (std::size_t g = 0; g < objs.size(); ++g) {
      if (!gt_done[g]) open_g.push_back(g);
    }
    for (std::size_t h = 0; h < hyps.size(); ++h) {
      if (!hyp_done[h]) open_h.push_back(h);
    }
    CostMatrix cost{open_g.size(), open_h.size(), std::vector<double>(open_g.size() * open_h.size())};
    for (std::size_t a = 0; a < open_g.size(); ++a) {
      for (std::size_t b = 0; b < open_h.size(); ++b) {
        cost.values[a * open_h.size() + b] = dist(open_g[a], open_h[b]);
      }
    }
    for (const auto& [a, b] : optimal_assignment(cost, threshold, method)) {
      const std::size_t g = open_g[a];
      const std::size_t h = open_h[b];
      const auto last = last_id.find(objs[g]->object_id);
      if (last != last_id.end() && last->second != hyps[h]->id) ++counts.ids;
      record(g, h, cost(a, b));
    }

    counts.fn += static_cast<std::size_t>(std::count(gt_done.begin(), gt_done.end(), false));
    counts.fp += static_cast<std::size_t>(std::count(hyp_done.begin(), hyp_done.end(), false));
    for (const auto& [gid, tid] : cur_match) last_id[gid] = tid;
    prev_match = std::move(cur_match);
  }
  return counts;
}

}  // namespace

MotResult clear_mot(std::span<const TrackFrame> tracks, std::span<const GtFrame> gts,
                    double dist_threshold, AssignmentMethod method) {
  require_aligned(tracks, gts);
  std::set<int> classes;
  for (const GtFrame& f : gts) {
    for (const AnnotatedObject& o : f.objects) classes.insert(o.class_id);
  }
  for (const TrackFrame& f : tracks) {
    for (const Track& t : f.tracks) {
      if (t.age == 0) classes.insert(t.class_id);
    }
  }
  MotResult out;
  for (const int c : classes) {
    const MotCounts counts = clear_mot_class(tracks, gts, c, dist_threshold, method);
    out.per_class[c] = counts;
    out.totals += counts;
  }
  return out;
}

}  // namespace centertrack
