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

#include "centertrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace centertrack {
namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kContactArea = 1e-12;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Intersection of segment p-q with the infinite line through a-b.
Vec2 line_intersection(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const double dp = cross(a, b, p);
  const double dq = cross(a, b, q);
  const double t = dp / (dp - dq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

}  // namespace

double normalize_angle(double radians) {
  double wrapped = radians - kTwoPi * std::floor((radians + kPi) / kTwoPi);
  // floor() can land one period off when radians + pi rounds onto a multiple of 2 pi.
  if (wrapped >= kPi) wrapped -= kTwoPi;
  if (wrapped < -kPi) wrapped += kTwoPi;
  return wrapped;
}

Box3D::Box3D(double cx_, double cy_, double cz_, double w_, double l_, double h_, double yaw_)
    : cx(cx_), cy(cy_), cz(cz_), w(w_), l(l_), h(h_), yaw(normalize_angle(yaw_)) {
  if (!(w > 0.0) || !(l > 0.0) || !(h > 0.0) || !std::isfinite(w) || !std::isfinite(l) ||
      !std::isfinite(h)) {
    throw std::invalid_argument("Box3D: sizes must be finite and positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(cz) || !std::isfinite(yaw_)) {
    throw std::invalid_argument("Box3D: center and yaw must be finite");
  }
}

BevPolygon box_to_bev_polygon(const Box3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.l;
  const double hw = 0.5 * box.w;
  // Local (length, width) corners, counter-clockwise.
  const std::array<Vec2, 4> local{{{hl, -hw}, {hl, hw}, {-hl, hw}, {-hl, -hw}}};
  BevPolygon out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {box.cx + c * local[i].x - s * local[i].y, box.cy + s * local[i].x + c * local[i].y};
  }
  return out;
}

double polygon_area(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = polygon[i];
    const Vec2& q = polygon[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  std::vector<Vec2> output(subject.begin(), subject.end());
  std::vector<Vec2> input;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % m];
    input.swap(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& cur = input[i];
      const Vec2& prev = input[(i + n - 1) % n];
      const bool cur_in = cross(a, b, cur) >= 0.0;
      const bool prev_in = cross(a, b, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) output.push_back(line_intersection(prev, cur, a, b));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(line_intersection(prev, cur, a, b));
      }
    }
  }
  return output;
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  // Bounding-circle rejection keeps far pairs (the common case in NMS) cheap.
  const double dx = a.cx - b.cx;
  const double dy = a.cy - b.cy;
  const double ra = 0.5 * std::hypot(a.w, a.l);
  const double rb = 0.5 * std::hypot(b.w, b.l);
  if (dx * dx + dy * dy > (ra + rb) * (ra + rb)) return 0.0;

  const BevPolygon pa = box_to_bev_polygon(a);
  const BevPolygon pb = box_to_bev_polygon(b);
  const std::vector<Vec2> inter = clip_convex(pa, pb);
  const double area = polygon_area(inter);
  return area <= kContactArea ? 0.0 : area;
}

double bev_iou(const Box3D& a, const Box3D& b) {
  const double inter = bev_intersection_area(a, b);
  if (inter == 0.0) return 0.0;
  const double uni = a.w * a.l + b.w * b.l - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou_3d(const Box3D& a, const Box3D& b) {
  const double overlap_z = std::min(a.top(), b.top()) - std::max(a.bottom(), b.bottom());
  if (overlap_z <= 0.0) return 0.0;
  const double inter = bev_intersection_area(a, b) * overlap_z;
  if (inter == 0.0) return 0.0;
  const double uni = a.volume() + b.volume() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance_bev(const Box3D& a, const Box3D& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

std::vector<std::size_t> rotated_nms_indices(std::span<const ScoredBox> boxes, double iou_threshold) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return boxes[i].score > boxes[j].score;
  });

  std::vector<std::size_t> kept;
  for (const std::size_t idx : order) {
    const ScoredBox& cand = boxes[idx];
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return boxes[k].class_id == cand.class_id && bev_iou(boxes[k].box, cand.box) >= iou_threshold;
    });
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<ScoredBox> rotated_nms(std::span<const ScoredBox> boxes, double iou_threshold) {
  std::vector<ScoredBox> out;
  for (const std::size_t idx : rotated_nms_indices(boxes, iou_threshold)) out.push_back(boxes[idx]);
  return out;
}

}  // namespace centertrack
