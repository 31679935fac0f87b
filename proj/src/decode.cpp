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

#include "centertrack/decode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace centertrack {

std::vector<Peak> extract_peaks(const FeatureMap& heatmap, std::size_t max_peaks,
                                double score_floor) {
  const std::size_t nx = heatmap.num_x();
  const std::size_t ny = heatmap.num_y();
  std::vector<Peak> peaks;

  for (std::size_t c = 0; c < heatmap.channels(); ++c) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double v = heatmap.at(ix, iy, c);
        if (!(v >= score_floor)) continue;
        bool strict_max = true;
        const std::size_t x_lo = ix == 0 ? 0 : ix - 1;
        const std::size_t y_lo = iy == 0 ? 0 : iy - 1;
        const std::size_t x_hi = std::min(ix + 1, nx - 1);
        const std::size_t y_hi = std::min(iy + 1, ny - 1);
        for (std::size_t x = x_lo; x <= x_hi && strict_max; ++x) {
          for (std::size_t y = y_lo; y <= y_hi; ++y) {
            if ((x != ix || y != iy) && !(v > heatmap.at(x, y, c))) {
              strict_max = false;
              break;
            }
          }
        }
        if (strict_max) peaks.push_back({ix, iy, static_cast<int>(c), v});
      }
    }
  }

  // Scan order is already (class, ix, iy) ascending, so a stable sort keeps the tie order.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  if (peaks.size() > max_peaks) peaks.resize(max_peaks);
  return peaks;
}

DecodeResult decode_detections(const TargetMaps& maps, std::size_t max_peaks, double score_floor) {
  const GridSpec& spec = maps.spec();
  DecodeResult result;
  for (const Peak& peak : extract_peaks(maps.heatmap, max_peaks, score_floor)) {
    const auto off = maps.offset.cell(peak.ix, peak.iy);
    const double cz = maps.height.at(peak.ix, peak.iy, 0);
    const auto log_size = maps.log_size.cell(peak.ix, peak.iy);
    const auto rot = maps.rot.cell(peak.ix, peak.iy);
    const auto vel = maps.vel.cell(peak.ix, peak.iy);

    const double gx = static_cast<double>(peak.ix) + off[0];
    const double gy = static_cast<double>(peak.iy) + off[1];
    const Vec2 world = grid_to_world(spec, gx, gy);
    const double w = std::exp(log_size[0]);
    const double l = std::exp(log_size[1]);
    const double h = std::exp(log_size[2]);
    const double yaw = std::atan2(rot[0], rot[1]);

    const double fields[] = {world.x, world.y, cz, w, l, h, yaw, vel[0], vel[1]};
    const bool usable = std::all_of(std::begin(fields), std::end(fields),
                                    [](double v) { return std::isfinite(v); }) &&
                        w > 0.0 && l > 0.0 && h > 0.0;
    if (!usable) {
      ++result.dropped_non_finite;
      continue;
    }
    result.detections.push_back(
        {Box3D(world.x, world.y, cz, w, l, h, yaw), peak.class_id, peak.value, {vel[0], vel[1]}});
  }
  return result;
}

std::vector<Detection> select_top(std::span<const Detection> dets, double nms_iou, std::size_t k) {
  if (k == 0) throw std::invalid_argument("select_top: k must be at least 1");
  std::vector<ScoredBox> scored;
  scored.reserve(dets.size());
  for (const Detection& d : dets) scored.push_back({d.box, d.score, d.class_id});

  std::vector<Detection> out;
  for (const std::size_t idx : rotated_nms_indices(scored, nms_iou)) {
    if (out.size() == k) break;
    out.push_back(dets[idx]);
  }
  return out;
}

}  // namespace centertrack
