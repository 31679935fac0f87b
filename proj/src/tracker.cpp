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

#include "centertrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace centertrack {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void TrackerConfig::validate() const {
  for (const double t : class_thresholds) {
    if (!(t > 0.0)) throw std::invalid_argument("TrackerConfig: class thresholds must be positive");
  }
  if (max_age < 0) throw std::invalid_argument("TrackerConfig: max_age must be non-negative");
}

CostMatrix cost_matrix(std::span<const Detection> dets, std::span<const Track> tracks) {
  CostMatrix f{dets.size(), tracks.size(), std::vector<double>(dets.size() * tracks.size())};
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const Detection& d = dets[i];
    const double px = d.box.cx - d.velocity.x;
    const double py = d.box.cy - d.velocity.y;
    double* row = f.values.data() + i * tracks.size();
    for (std::size_t j = 0; j < tracks.size(); ++j) {
      const Track& t = tracks[j];
      const double dx = px - t.center.x;
      const double dy = py - t.center.y;
      row[j] = t.class_id == d.class_id ? std::sqrt(dx * dx + dy * dy) : kInf;
    }
  }
  return f;
}

Tracker::Tracker(TrackerConfig config) : config_(std::move(config)) { config_.validate(); }

double Tracker::threshold(int class_id) const {
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= config_.class_thresholds.size()) {
    throw std::invalid_argument("Tracker: no matching threshold for class " + std::to_string(class_id));
  }
  return config_.class_thresholds[static_cast<std::size_t>(class_id)];
}

const std::vector<Track>& Tracker::step(std::span<const Detection> dets) {
  for (const Detection& d : dets) threshold(d.class_id);
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  std::vector<Detection> sorted;
  sorted.reserve(dets.size());
  for (const std::size_t i : order) sorted.push_back(dets[i]);

  const std::vector<Track>& prev = tracks_;
  const CostMatrix cost = cost_matrix(sorted, prev);
  std::vector<bool> matched(prev.size(), false);

  std::vector<Track> next;
  next.reserve(sorted.size() + prev.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Detection& d = sorted[i];
    std::size_t best = prev.size();
    double best_cost = kInf;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      if (matched[j]) continue;
      // Strict < keeps the lowest index on ties; the first finite or
      // infinite candidate still seeds `best`.
      if (best == prev.size() || cost(i, j) < best_cost) {
        best = j;
        best_cost = cost(i, j);
      }
    }

    Track t{d.box.center(), d.velocity, d.class_id, d.box, d.score, 0, 0};
    if (best < prev.size() && best_cost <= threshold(d.class_id)) {
      t.id = prev[best].id;
      matched[best] = true;
    } else {
      t.id = next_id_++;
    }
    next.push_back(t);
  }

  for (std::size_t j = 0; j < prev.size(); ++j) {
    if (matched[j] || prev[j].age >= config_.max_age) continue;
    Track t = prev[j];
    t.age += 1;
    t.center.x += t.velocity.x;
    t.center.y += t.velocity.y;
    t.box.cx = t.center.x;
    t.box.cy = t.center.y;
    next.push_back(t);
  }

  tracks_ = std::move(next);
  return tracks_;
}

}  // namespace centertrack
