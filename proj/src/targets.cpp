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

#include "centertrack/targets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "centertrack/random.hpp"

namespace centertrack {

CornerRadii corner_radii(double l_cells, double w_cells, double min_overlap) {
  if (!(l_cells > 0.0) || !(w_cells > 0.0)) {
    throw std::invalid_argument("gaussian_radius: box dimensions must be positive");
  }
  if (!(min_overlap > 0.0) || !(min_overlap < 1.0)) {
    throw std::invalid_argument("gaussian_radius: min_overlap must lie in (0, 1)");
  }
  const double sum = l_cells + w_cells;
  const double area = l_cells * w_cells;
  const double m = min_overlap;

  // Translated by r along both axes:
  //   (l - r)(w - r) / (2lw - (l - r)(w - r)) = m
  //   r^2 - (l + w) r + lw (1 - m) / (1 + m) = 0, smaller root.
  const double c1 = area * (1.0 - m) / (1.0 + m);
  const double r1 = 0.5 * (sum - std::sqrt(sum * sum - 4.0 * c1));

  // Shrunk by r on every side:
  //   (l - 2r)(w - 2r) / (lw) = m
  //   4 r^2 - 2 (l + w) r + (1 - m) lw = 0, smaller root.
  const double b2 = 2.0 * sum;
  const double r2 = (b2 - std::sqrt(b2 * b2 - 16.0 * (1.0 - m) * area)) / 8.0;

  // Grown by r on every side:
  //   lw / ((l + 2r)(w + 2r)) = m
  //   4 m r^2 + 2 m (l + w) r + (m - 1) lw = 0, positive root.
  const double b3 = 2.0 * m * sum;
  const double r3 = (-b3 + std::sqrt(b3 * b3 - 16.0 * m * (m - 1.0) * area)) / (8.0 * m);

  return {r1, r2, r3};
}

double gaussian_radius(double l_cells, double w_cells, double min_overlap, double min_radius) {
  const CornerRadii r = corner_radii(l_cells, w_cells, min_overlap);
  return std::max(std::min({r.translated, r.shrunk, r.grown}), min_radius);
}

TargetMaps::TargetMaps(const GridSpec& spec, std::size_t num_classes)
    : heatmap(spec, num_classes),
      offset(spec, 2),
      height(spec, 1),
      log_size(spec, 3),
      rot(spec, 2),
      vel(spec, 2),
      valid_mask(spec.num_cells(), 0) {}

namespace {

void check_class(const AnnotatedObject& obj, std::size_t num_classes) {
  if (obj.class_id < 0 || static_cast<std::size_t>(obj.class_id) >= num_classes) {
    throw std::invalid_argument("render: class_id " + std::to_string(obj.class_id) +
                                " outside [0, " + std::to_string(num_classes) + ")");
  }
}

}  // namespace

FeatureMap render_heatmap(std::span<const AnnotatedObject> objects, const GridSpec& spec,
                          std::size_t num_classes, const RenderOptions& options,
                          RenderReport* report) {
  FeatureMap heatmap(spec, num_classes);
  const long nx = static_cast<long>(spec.num_x());
  const long ny = static_cast<long>(spec.num_y());

  for (const AnnotatedObject& obj : objects) {
    check_class(obj, num_classes);
    const CellIndex center = cell_of(spec, obj.box.cx, obj.box.cy);
    if (!cell_in_bounds(spec, center)) {
      if (report) ++report->skipped_out_of_range;
      continue;
    }
    const double sigma = gaussian_radius(obj.box.l / spec.cell(), obj.box.w / spec.cell(),
                                         options.min_overlap, options.min_radius);
    const double two_sigma_sq = 2.0 * sigma * sigma;
    // Support truncated at 3 sigma, i.e. kernel values below exp(-4.5).
    const double cutoff_sq = 9.0 * sigma * sigma;
    const long reach = static_cast<long>(std::floor(3.0 * sigma));
    const auto channel = static_cast<std::size_t>(obj.class_id);

    for (long dx = -reach; dx <= reach; ++dx) {
      const long ix = center.ix + dx;
      if (ix < 0 || ix >= nx) continue;
      for (long dy = -reach; dy <= reach; ++dy) {
        const long iy = center.iy + dy;
        if (iy < 0 || iy >= ny) continue;
        const auto d_sq = static_cast<double>(dx * dx + dy * dy);
        if (d_sq > cutoff_sq) continue;
        const double value = std::exp(-d_sq / two_sigma_sq);
        double& cell = heatmap.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy), channel);
        cell = std::max(cell, value);
        if (report) ++report->splat_cells;
      }
    }
    if (report) ++report->rendered;
  }
  return heatmap;
}

void render_regression(std::span<const AnnotatedObject> objects, TargetMaps& maps,
                       RenderReport* report) {
  const GridSpec& spec = maps.spec();
  // Object id that owns each written center cell, for collision reports.
  std::vector<std::int64_t> owner(spec.num_cells(), 0);

  for (const AnnotatedObject& obj : objects) {
    check_class(obj, maps.num_classes());
    const CellIndex center = cell_of(spec, obj.box.cx, obj.box.cy);
    if (!cell_in_bounds(spec, center)) continue;
    const auto ix = static_cast<std::size_t>(center.ix);
    const auto iy = static_cast<std::size_t>(center.iy);
    const std::size_t flat = ix * spec.num_y() + iy;

    if (maps.valid_mask[flat] != 0 && report) {
      report->collisions.push_back({owner[flat], obj.object_id, center});
    }
    const Vec2 g = world_to_grid(spec, obj.box.cx, obj.box.cy);
    maps.offset.at(ix, iy, 0) = g.x - static_cast<double>(center.ix);
    maps.offset.at(ix, iy, 1) = g.y - static_cast<double>(center.iy);
    maps.height.at(ix, iy, 0) = obj.box.cz;
    maps.log_size.at(ix, iy, 0) = std::log(obj.box.w);
    maps.log_size.at(ix, iy, 1) = std::log(obj.box.l);
    maps.log_size.at(ix, iy, 2) = std::log(obj.box.h);
    maps.rot.at(ix, iy, 0) = std::sin(obj.box.yaw);
    maps.rot.at(ix, iy, 1) = std::cos(obj.box.yaw);
    maps.vel.at(ix, iy, 0) = obj.velocity.x;
    maps.vel.at(ix, iy, 1) = obj.velocity.y;
    maps.valid_mask[flat] = 1;
    owner[flat] = obj.object_id;
  }
}

TargetMaps render_targets(std::span<const AnnotatedObject> objects, const GridSpec& spec,
                          std::size_t num_classes, const RenderOptions& options,
                          RenderReport* report) {
  TargetMaps maps(spec, num_classes);
  maps.heatmap = render_heatmap(objects, spec, num_classes, options, report);
  render_regression(objects, maps, report);
  return maps;
}

std::vector<ProposalSample> sample_proposals(std::span<const Box3D> proposals,
                                             std::span<const AnnotatedObject> gts, std::size_t n,
                                             double pos_iou, std::uint64_t seed) {
  if (proposals.empty()) throw std::invalid_argument("sample_proposals: no proposals");
  if (n % 2 != 0) throw std::invalid_argument("sample_proposals: sample count must be even");

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  std::vector<std::optional<std::size_t>> best_gt(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    double best = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double iou = iou_3d(proposals[i], gts[g].box);
      if (iou > best) {
        best = iou;
        best_gt[i] = g;
      }
    }
    (best >= pos_iou ? positives : negatives).push_back(i);
  }

  const std::size_t half = n / 2;
  const std::size_t take_pos = std::min(positives.size(), std::max(half, n - std::min(n, negatives.size())));
  const std::size_t take_neg = std::min(negatives.size(), n - take_pos);

  Rng rng(seed);
  std::vector<ProposalSample> out;
  out.reserve(take_pos + take_neg);
  for (const std::size_t k : rng.sample_without_replacement(positives.size(), take_pos)) {
    const std::size_t i = positives[k];
    out.push_back({i, proposals[i], true, best_gt[i]});
  }
  for (const std::size_t k : rng.sample_without_replacement(negatives.size(), take_neg)) {
    const std::size_t i = negatives[k];
    out.push_back({i, proposals[i], false, std::nullopt});
  }
  return out;
}

}  // namespace centertrack
