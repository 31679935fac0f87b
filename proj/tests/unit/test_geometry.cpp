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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "centertrack/geometry.hpp"
#include "oracles.hpp"

namespace centertrack {
namespace {

bool has_corner(const BevPolygon& p, double x, double y) {
  return std::any_of(p.begin(), p.end(),
                     [&](const Vec2& v) { return std::abs(v.x - x) < 1e-12 && std::abs(v.y - y) < 1e-12; });
}

Box3D random_box(std::mt19937_64& gen, double spread) {
  std::uniform_real_distribution<double> pos(-spread, spread), size(0.3, 5.0), yaw(-kPi, kPi), z(-1.0, 1.0);
  return Box3D(pos(gen), pos(gen), z(gen), size(gen), size(gen), size(gen), yaw(gen));
}

TEST(Box3D, RejectsNonPositiveSize) {
  EXPECT_THROW(Box3D(0, 0, 0, 0.0, 1, 1, 0), std::invalid_argument);
  EXPECT_THROW(Box3D(0, 0, 0, 1, -1, 1, 0), std::invalid_argument);
  EXPECT_THROW(Box3D(0, 0, 0, 1, 1, 0, 0), std::invalid_argument);
}

TEST(Box3D, YawWrapsIntoHalfOpenRange) {
  EXPECT_DOUBLE_EQ(Box3D(0, 0, 0, 1, 1, 1, kPi).yaw, -kPi);
  EXPECT_NEAR(Box3D(0, 0, 0, 1, 1, 1, 2 * kPi + 0.25).yaw, 0.25, 1e-12);
  EXPECT_NEAR(Box3D(0, 0, 0, 1, 1, 1, -3 * kPi / 2).yaw, kPi / 2, 1e-12);
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double n = normalize_angle(a);
    EXPECT_GE(n, -kPi);
    EXPECT_LT(n, kPi);
    EXPECT_NEAR(std::sin(n), std::sin(a), 1e-12);
    EXPECT_NEAR(std::cos(n), std::cos(a), 1e-12);
  }
}

TEST(BevPolygon, AxisAlignedCorners) {
  const BevPolygon p = box_to_bev_polygon(Box3D(0, 0, 0, 2, 4, 1, 0));
  for (const double sx : {-2.0, 2.0})
    for (const double sy : {-1.0, 1.0}) EXPECT_TRUE(has_corner(p, sx, sy));
}

TEST(BevPolygon, QuarterTurnCorners) {
  const BevPolygon p = box_to_bev_polygon(Box3D(0, 0, 0, 2, 4, 1, kPi / 2));
  for (const double sx : {-1.0, 1.0})
    for (const double sy : {-2.0, 2.0}) EXPECT_TRUE(has_corner(p, sx, sy));
}

TEST(BevPolygon, RotatedSquareArea) {
  const BevPolygon p = box_to_bev_polygon(Box3D(1, 1, 0, 1, 1, 1, kPi / 4));
  EXPECT_NEAR(polygon_area(p), 1.0, 1e-12);
  EXPECT_TRUE(has_corner(p, 1.0 + std::sqrt(0.5), 1.0) || has_corner(p, 1.0, 1.0 + std::sqrt(0.5)));
}

TEST(BevPolygon, CounterClockwiseWithAreaWl) {
  std::mt19937_64 gen(1);
  for (int i = 0; i < 500; ++i) {
    const Box3D b = random_box(gen, 50.0);
    const BevPolygon p = box_to_bev_polygon(b);
    // Signed shoelace computed here, positive means counter-clockwise.
    double twice = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const Vec2& u = p[k];
      const Vec2& v = p[(k + 1) % 4];
      twice += u.x * v.y - v.x * u.y;
    }
    EXPECT_GT(twice, 0.0);
    EXPECT_NEAR(0.5 * twice, b.w * b.l, 1e-9);
  }
}

TEST(BevIou, IdentityAndDisjoint) {
  const Box3D a(3, -2, 0, 1.5, 4, 1.6, 0.7);
  EXPECT_NEAR(bev_iou(a, a), 1.0, 1e-12);
  EXPECT_EQ(bev_iou(Box3D(0, 0, 0, 2, 2, 2, 0), Box3D(100, 0, 0, 2, 2, 2, 0)), 0.0);
}

TEST(BevIou, RotatedUnitSquare) {
  const double inter = 2.0 * (std::sqrt(2.0) - 1.0);
  const double expected = inter / (2.0 - inter);
  EXPECT_NEAR(bev_iou(Box3D(0, 0, 0, 1, 1, 1, 0), Box3D(0, 0, 0, 1, 1, 1, kPi / 4)), expected, 1e-12);
}

TEST(BevIou, TangentBoxesGiveZero) {
  EXPECT_EQ(bev_iou(Box3D(0, 0, 0, 2, 2, 1, 0), Box3D(2, 0, 0, 2, 2, 1, 0)), 0.0);
  EXPECT_EQ(bev_iou(Box3D(0, 0, 0, 2, 2, 1, 0), Box3D(2, 2, 0, 2, 2, 1, 0)), 0.0);
}

TEST(BevIou, NestedBoxes) {
  // Small box fully inside big box: IoU = small / big.
  EXPECT_NEAR(bev_iou(Box3D(0, 0, 0, 4, 4, 1, 0), Box3D(0.5, 0.2, 0, 1, 2, 1, 0.3)), 2.0 / 16.0, 1e-12);
}

TEST(BevIou, SymmetricAndBounded) {
  std::mt19937_64 gen(2);
  for (int i = 0; i < 2000; ++i) {
    const Box3D a = random_box(gen, 3.0), b = random_box(gen, 3.0);
    const double ab = bev_iou(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(ab, bev_iou(b, a), 1e-12);
  }
}

TEST(BevIou, MatchesMonteCarlo) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 60; ++i) {
    const Box3D a = random_box(gen, 2.0), b = random_box(gen, 2.0);
    EXPECT_NEAR(bev_iou(a, b), oracle::monte_carlo_iou(a, b, 200000, 100 + i), 5e-3) << "pair " << i;
  }
}

TEST(BevIou, RigidMotionInvariant) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> ang(-kPi, kPi), off(-30, 30);
  for (int i = 0; i < 500; ++i) {
    const Box3D a = random_box(gen, 2.0), b = random_box(gen, 2.0);
    const double th = ang(gen), tx = off(gen), ty = off(gen);
    const auto move = [&](const Box3D& q) {
      return Box3D(std::cos(th) * q.cx - std::sin(th) * q.cy + tx, std::sin(th) * q.cx + std::cos(th) * q.cy + ty,
                   q.cz, q.w, q.l, q.h, q.yaw + th);
    };
    EXPECT_NEAR(bev_iou(a, b), bev_iou(move(a), move(b)), 1e-9);
  }
}

TEST(Iou3d, Examples) {
  const Box3D a(0, 0, 1, 2, 4, 2, 0);
  EXPECT_NEAR(iou_3d(a, a), 1.0, 1e-12);
  EXPECT_EQ(iou_3d(a, Box3D(0, 0, 3, 2, 4, 2, 0)), 0.0);
  EXPECT_NEAR(iou_3d(a, Box3D(0, 0, 2, 2, 4, 2, 0)), 1.0 / 3.0, 1e-12);
}

TEST(Iou3d, BoundedBySymmetricBev) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const Box3D a = random_box(gen, 2.0), b = random_box(gen, 2.0);
    const double v = iou_3d(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, iou_3d(b, a), 1e-12);
  }
}

TEST(CenterDistance, PythagoreanTriples) {
  EXPECT_EQ(center_distance_bev(Box3D(1, 1, 0, 1, 1, 1, 0), Box3D(1, 1, 5, 2, 2, 2, 1)), 0.0);
  EXPECT_NEAR(center_distance_bev(Box3D(0, 0, 0, 1, 1, 1, 0), Box3D(3, 4, 0, 1, 1, 1, 0)), 5.0, 1e-12);
  EXPECT_NEAR(center_distance_bev(Box3D(1, 2, 0, 1, 1, 1, 0), Box3D(-2, 6, 0, 1, 1, 1, 0)), 5.0, 1e-12);
}

TEST(CenterDistance, TriangleInequality) {
  std::mt19937_64 gen(6);
  for (int i = 0; i < 500; ++i) {
    const Box3D a = random_box(gen, 20), b = random_box(gen, 20), c = random_box(gen, 20);
    EXPECT_LE(center_distance_bev(a, c), center_distance_bev(a, b) + center_distance_bev(b, c) + 1e-12);
  }
}

TEST(RotatedNms, Examples) {
  const Box3D a(0, 0, 0, 2, 2, 1, 0);
  EXPECT_EQ(rotated_nms(std::vector<ScoredBox>{{a, 0.5, 0}}, 0.5).size(), 1u);

  const auto same = rotated_nms(std::vector<ScoredBox>{{a, 0.8, 0}, {a, 0.9, 0}}, 0.5);
  ASSERT_EQ(same.size(), 1u);
  EXPECT_EQ(same[0].score, 0.9);

  // A and B overlap with IoU 0.6: 2x2 boxes offset 0.5 along x give 1.5*2/(8-3) = 0.6.
  const Box3D b(0.5, 0, 0, 2, 2, 1, 0);
  const Box3D c(20, 0, 0, 2, 2, 1, 0);
  ASSERT_NEAR(bev_iou(a, b), 0.6, 1e-12);
  const std::vector<ScoredBox> in{{c, 0.7, 0}, {b, 0.8, 0}, {a, 0.9, 0}};
  EXPECT_EQ(rotated_nms_indices(in, 0.5), (std::vector<std::size_t>{2, 0}));
}

TEST(RotatedNms, ClassWise) {
  const Box3D a(0, 0, 0, 2, 2, 1, 0);
  EXPECT_EQ(rotated_nms(std::vector<ScoredBox>{{a, 0.9, 0}, {a, 0.8, 1}}, 0.5).size(), 2u);
}

TEST(RotatedNms, KeptSetHasNoSuppressiblePair) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> score(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ScoredBox> boxes;
    for (int i = 0; i < 60; ++i) boxes.push_back({random_box(gen, 6.0), score(gen), static_cast<int>(i % 2)});
    const auto kept = rotated_nms(boxes, 0.3);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) EXPECT_GE(kept[i - 1].score, kept[i].score);
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].class_id == kept[j].class_id) EXPECT_LT(bev_iou(kept[i].box, kept[j].box), 0.3);
      }
    }
    // Every dropped box is suppressed by a kept, higher-scored box of its class.
    for (const ScoredBox& b : boxes) {
      const bool is_kept = std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
        return k.box == b.box && k.score == b.score;
      });
      if (is_kept) continue;
      EXPECT_TRUE(std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
        return k.class_id == b.class_id && k.score >= b.score && bev_iou(k.box, b.box) >= 0.3;
      }));
    }
  }
}

}  // namespace
}  // namespace centertrack
