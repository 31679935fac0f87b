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
/// \brief Yaw-only 3D boxes, rotated BEV/3D IoU and class-wise rotated NMS.
#ifndef CENTERTRACK_GEOMETRY_HPP_
#define CENTERTRACK_GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace centertrack {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

/**
 * Box in ego/world coordinates. The length axis points along the heading
 * (cos yaw, sin yaw), the width axis along (-sin yaw, cos yaw). cz is the
 * height of the box center.
 *
 * The constructor rejects non-positive or non-finite sizes and wraps yaw into
 * [-pi, pi). Fields stay public for aggregate-style access; code that writes
 * them directly is responsible for keeping the invariants.
 */
struct Box3D {
  double cx = 0.0;
  double cy = 0.0;
  double cz = 0.0;
  double w = 1.0;
  double l = 1.0;
  double h = 1.0;
  double yaw = 0.0;

  Box3D() = default;
  Box3D(double cx, double cy, double cz, double w, double l, double h, double yaw);

  Vec2 center() const { return {cx, cy}; }
  double bottom() const { return cz - 0.5 * h; }
  double top() const { return cz + 0.5 * h; }
  double volume() const { return w * l * h; }

  friend bool operator==(const Box3D&, const Box3D&) = default;
};

/// Four footprint corners in counter-clockwise order.
using BevPolygon = std::array<Vec2, 4>;

BevPolygon box_to_bev_polygon(const Box3D& box);

/// Signed shoelace area; positive for counter-clockwise vertex order.
double polygon_area(std::span<const Vec2> polygon);

/// Clips `subject` against the convex counter-clockwise `clip` polygon.
/// Points on the clip boundary count as inside.
std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);

/// Footprint intersection area; contact areas at or below 1e-12 are reported as 0.
double bev_intersection_area(const Box3D& a, const Box3D& b);

double bev_iou(const Box3D& a, const Box3D& b);
double iou_3d(const Box3D& a, const Box3D& b);
double center_distance_bev(const Box3D& a, const Box3D& b);

inline constexpr double kDefaultNmsIou = 0.2;

struct ScoredBox {
  Box3D box;
  double score = 0.0;
  int class_id = 0;
};

/// Greedy class-wise NMS. Returns indices into `boxes` of the kept entries in
/// descending score order (equal scores keep input order). A box survives iff
/// its BEV IoU with every kept box of the same class is below `iou_threshold`.
std::vector<std::size_t> rotated_nms_indices(std::span<const ScoredBox> boxes, double iou_threshold);

std::vector<ScoredBox> rotated_nms(std::span<const ScoredBox> boxes, double iou_threshold);

}  // namespace centertrack

#endif  // CENTERTRACK_GEOMETRY_HPP_
