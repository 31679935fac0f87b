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

#include <cmath>
#include <random>
#include <set>

#include "centertrack/random.hpp"
#include "centertrack/targets.hpp"
#include "oracles.hpp"

namespace centertrack {
namespace {

const GridSpec kSpec(-51.2, 51.2, -51.2, 51.2, 0.8);

AnnotatedObject object(double x, double y, double w, double l, double yaw, int cls = 0, std::int64_t id = 1) {
  return {Box3D(x, y, 0.8, w, l, 1.6, yaw), cls, {0.3, -0.1}, id};
}

TEST(GaussianRadius, MatchesBisectionOracle) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> side(0.5, 60.0), overlap(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double l = side(gen), w = side(gen), m = overlap(gen);
    EXPECT_NEAR(gaussian_radius(l, w, m), oracle::gaussian_radius(l, w, m), 1e-6) << l << " " << w << " " << m;
    // Without the floor, every corner radius agrees with its own constraint.
    EXPECT_NEAR(gaussian_radius(l, w, m, 0.0), oracle::gaussian_radius(l, w, m, 0.0), 1e-6);
  }
}

TEST(GaussianRadius, SquareBoxExample) {
  EXPECT_NEAR(gaussian_radius(20, 20, 0.1), oracle::gaussian_radius(20, 20, 0.1), 1e-6);
  // For l = w = s every constraint has a closed form.
  const double s = 20, m = 0.1;
  const double r1 = s - s * std::sqrt(2 * m / (1 + m));
  const double r2 = 0.5 * s * (1 - std::sqrt(m));
  const double r3 = 0.5 * s * (1 / std::sqrt(m) - 1);
  const CornerRadii r = corner_radii(s, s, m);
  EXPECT_NEAR(r.translated, r1, 1e-9);
  EXPECT_NEAR(r.shrunk, r2, 1e-9);
  EXPECT_NEAR(r.grown, r3, 1e-9);
  EXPECT_NEAR(gaussian_radius(s, s, m), std::max(std::min({r1, r2, r3}), 2.0), 1e-9);
}

TEST(GaussianRadius, FloorAndMonotone) {
  EXPECT_EQ(gaussian_radius(1.0, 1.0, 0.1), 2.0);
  EXPECT_EQ(gaussian_radius(2.4, 5.8, 0.7), 2.0);
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> side(0.2, 80.0), overlap(0.05, 0.95), grow(0.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double l = side(gen), w = side(gen), m = overlap(gen), d = grow(gen);
    const double r = gaussian_radius(l, w, m);
    EXPECT_GE(r, 2.0);
    EXPECT_GE(gaussian_radius(l + d, w, m), r - 1e-12);
    EXPECT_GE(gaussian_radius(l, w + d, m), r - 1e-12);
  }
}

TEST(GaussianRadius, RejectsBadArguments) {
  EXPECT_THROW(gaussian_radius(0, 1, 0.1), std::invalid_argument);
  EXPECT_THROW(gaussian_radius(1, -1, 0.1), std::invalid_argument);
  EXPECT_THROW(gaussian_radius(1, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(gaussian_radius(1, 1, 1.0), std::invalid_argument);
}

TEST(RenderHeatmap, EmptyIsZero) {
  const FeatureMap m = render_heatmap({}, kSpec, 2);
  for (const double v : m.values()) EXPECT_EQ(v, 0.0);
}

TEST(RenderHeatmap, PeakAndMonotoneDecay) {
  const std::vector<AnnotatedObject> objs{object(3.3, -7.1, 2.0, 4.5, 0.4, 1)};
  const FeatureMap m = render_heatmap(objs, kSpec, 2);
  const CellIndex c = cell_of(kSpec, 3.3, -7.1);
  const auto ix = static_cast<std::size_t>(c.ix), iy = static_cast<std::size_t>(c.iy);
  EXPECT_EQ(m.at(ix, iy, 1), 1.0);
  std::size_t ones = 0;
  for (const double v : m.values()) ones += v == 1.0 ? 1 : 0;
  EXPECT_EQ(ones, 1u);
  for (std::size_t d = 1; d < 8; ++d) {
    EXPECT_LE(m.at(ix + d, iy, 1), m.at(ix + d - 1, iy, 1));
    EXPECT_LE(m.at(ix, iy - d, 1), m.at(ix, iy - d + 1, 1));
  }
  for (std::size_t x = 0; x < kSpec.num_x(); ++x)
    for (std::size_t y = 0; y < kSpec.num_y(); ++y) EXPECT_EQ(m.at(x, y, 0), 0.0);
}

// Independent kernel with the bisection radius.
double kernel(const AnnotatedObject& o, long x, long y) {
  const CellIndex c = cell_of(kSpec, o.box.cx, o.box.cy);
  const double s = oracle::gaussian_radius(o.box.l / kSpec.cell(), o.box.w / kSpec.cell(), 0.1);
  const double d2 = static_cast<double>((x - c.ix) * (x - c.ix) + (y - c.iy) * (y - c.iy));
  return d2 > 9 * s * s ? 0.0 : std::exp(-d2 / (2 * s * s));
}

TEST(RenderHeatmap, OverlapTakesElementwiseMax) {
  const std::vector<AnnotatedObject> objs{object(0.3, 0.2, 6.0, 9.0, 0.0, 0, 1),
                                          object(4.1, 1.7, 5.0, 12.0, 1.0, 0, 2)};
  const FeatureMap m = render_heatmap(objs, kSpec, 1);
  for (long x = 0; x < 128; ++x)
    for (long y = 0; y < 128; ++y)
      EXPECT_NEAR(m.at(x, y, 0), std::max(kernel(objs[0], x, y), kernel(objs[1], x, y)), 1e-6);
}

TEST(RenderHeatmap, ReflectionSymmetry) {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> pos(-45, 45), size(0.5, 6), yaw(-kPi, kPi);
  std::vector<AnnotatedObject> objs, mirrored;
  for (int i = 0; i < 12; ++i) {
    const double x = pos(gen), y = pos(gen), w = size(gen), l = size(gen), a = yaw(gen);
    objs.push_back(object(x, y, w, l, a, i % 2, i + 1));
    mirrored.push_back(object(-x, y, w, l, kPi - a, i % 2, i + 1));
  }
  const FeatureMap a = render_heatmap(objs, kSpec, 2), b = render_heatmap(mirrored, kSpec, 2);
  for (std::size_t x = 0; x < 128; ++x)
    for (std::size_t y = 0; y < 128; ++y)
      for (std::size_t c = 0; c < 2; ++c) ASSERT_EQ(a.at(x, y, c), b.at(127 - x, y, c));
}

TEST(RenderHeatmap, SplatSupportBound) {
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> pos(-50, 50), size(0.5, 8);
  std::vector<AnnotatedObject> objs;
  double bound = 0.0;
  for (int i = 0; i < 30; ++i) {
    objs.push_back(object(pos(gen), pos(gen), size(gen), size(gen), 0.2 * i, i % 3, i + 1));
    const double s = oracle::gaussian_radius(objs.back().box.l / 0.8, objs.back().box.w / 0.8, 0.1);
    bound += (6 * s + 1) * (6 * s + 1);
  }
  RenderReport report;
  render_heatmap(objs, kSpec, 3, {}, &report);
  EXPECT_EQ(report.rendered, 30u);
  EXPECT_LE(static_cast<double>(report.splat_cells), bound);
}

TEST(RenderHeatmap, SkipsOutOfRange) {
  const std::vector<AnnotatedObject> objs{object(60, 0, 2, 4, 0), object(0, -51.3, 2, 4, 0), object(1, 1, 2, 4, 0)};
  RenderReport report;
  const FeatureMap m = render_heatmap(objs, kSpec, 1, {}, &report);
  EXPECT_EQ(report.skipped_out_of_range, 2u);
  EXPECT_EQ(report.rendered, 1u);
}

TEST(RenderRegression, ChannelValues) {
  // Exactly on a sample point: x = -51.2 + 70 * 0.8.
  const double x = -51.2 + 70 * 0.8, y = -51.2 + 10 * 0.8;
  std::vector<AnnotatedObject> objs{{Box3D(x, y, 0.5, 1, 1, 1, kPi / 2), 0, {0.25, -0.5}, 7}};
  const TargetMaps t = render_targets(objs, kSpec, 1);
  const CellIndex c = cell_of(kSpec, x, y);
  const auto ix = static_cast<std::size_t>(c.ix), iy = static_cast<std::size_t>(c.iy);
  ASSERT_TRUE(t.valid(ix, iy));
  EXPECT_NEAR(t.offset.at(ix, iy, 0), 0.0, 1e-9);
  EXPECT_NEAR(t.offset.at(ix, iy, 1), 0.0, 1e-9);
  EXPECT_EQ(t.height.at(ix, iy, 0), 0.5);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(t.log_size.at(ix, iy, k), 0.0);
  EXPECT_NEAR(t.rot.at(ix, iy, 0), 1.0, 1e-15);
  EXPECT_NEAR(t.rot.at(ix, iy, 1), 0.0, 1e-15);
  EXPECT_EQ(t.vel.at(ix, iy, 0), 0.25);
  EXPECT_EQ(t.vel.at(ix, iy, 1), -0.5);
  std::size_t valid = 0;
  for (const auto v : t.valid_mask) valid += v;
  EXPECT_EQ(valid, 1u);
}

TEST(RenderRegression, OffsetIsFractionalPart) {
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> pos(-51, 51), yaw(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const double x = pos(gen), y = pos(gen);
    std::vector<AnnotatedObject> objs{object(x, y, 1.5, 3.0, yaw(gen))};
    const TargetMaps t = render_targets(objs, kSpec, 1);
    const double gx = (x + 51.2) / 0.8, gy = (y + 51.2) / 0.8;
    const auto ix = static_cast<std::size_t>(std::floor(gx)), iy = static_cast<std::size_t>(std::floor(gy));
    ASSERT_TRUE(t.valid(ix, iy));
    EXPECT_NEAR(t.offset.at(ix, iy, 0), gx - std::floor(gx), 1e-12);
    EXPECT_NEAR(t.offset.at(ix, iy, 1), gy - std::floor(gy), 1e-12);
    const double s = t.rot.at(ix, iy, 0), c = t.rot.at(ix, iy, 1);
    EXPECT_NEAR(s * s + c * c, 1.0, 1e-12);
  }
}

TEST(RenderRegression, CollisionKeepsLaterObject) {
  std::vector<AnnotatedObject> objs{object(0.1, 0.1, 2, 4, 0, 0, 11), object(0.3, 0.2, 1, 2, 0.5, 0, 12)};
  RenderReport report;
  const TargetMaps t = render_targets(objs, kSpec, 1, {}, &report);
  ASSERT_EQ(report.collisions.size(), 1u);
  EXPECT_EQ(report.collisions[0].overwritten_object_id, 11);
  EXPECT_EQ(report.collisions[0].winning_object_id, 12);
  EXPECT_EQ(report.collisions[0].cell, (CellIndex{64, 64}));
  EXPECT_NEAR(t.log_size.at(64, 64, 0), std::log(1.0), 1e-15);
}

std::vector<AnnotatedObject> two_gts() {
  return {object(0, 0, 2, 4, 0, 0, 1), object(20, 5, 2, 4, 0.3, 0, 2)};
}

TEST(SampleProposals, AllPositive) {
  const auto gts = two_gts();
  const std::vector<Box3D> props(6, gts[0].box);
  const auto s = sample_proposals(props, gts, 4, 0.55, 1);
  ASSERT_EQ(s.size(), 4u);
  for (const auto& p : s) {
    EXPECT_TRUE(p.positive);
    EXPECT_EQ(p.matched_gt, 0u);
  }
}

TEST(SampleProposals, AllNegative) {
  const auto gts = two_gts();
  std::vector<Box3D> props;
  for (int i = 0; i < 5; ++i) props.push_back(Box3D(-30.0 - i, 30, 0.8, 2, 4, 1.6, 0));
  const auto s = sample_proposals(props, gts, 4, 0.55, 1);
  ASSERT_EQ(s.size(), 4u);
  for (const auto& p : s) {
    EXPECT_FALSE(p.positive);
    EXPECT_FALSE(p.matched_gt.has_value());
  }
}

TEST(SampleProposals, SeededDrawIsReproducible) {
  const auto gts = two_gts();
  std::vector<Box3D> props;
  // Indices 1, 4 and 8 are near-copies of a ground truth (IoU >= 0.55).
  for (int i = 0; i < 10; ++i) {
    if (i == 1 || i == 4) props.push_back(Box3D(0.1 * i, 0, 0.8, 2, 4, 1.6, 0));
    else if (i == 8) props.push_back(Box3D(20.2, 5, 0.8, 2, 4, 1.6, 0.3));
    else props.push_back(Box3D(-40 + i, -40, 0.8, 2, 4, 1.6, 0));
  }
  const auto s = sample_proposals(props, gts, 4, 0.55, 99);
  ASSERT_EQ(s.size(), 4u);
  // Enumerate the same draw: two of the positive list, then two of the negative list.
  const std::vector<std::size_t> pos{1, 4, 8}, neg{0, 2, 3, 5, 6, 7, 9};
  Rng rng(99);
  const auto pk = rng.sample_without_replacement(3, 2);
  const auto nk = rng.sample_without_replacement(7, 2);
  const std::vector<std::size_t> expect{pos[pk[0]], pos[pk[1]], neg[nk[0]], neg[nk[1]]};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s[i].proposal_index, expect[i]);
    EXPECT_EQ(s[i].positive, i < 2);
  }
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(*s[i].matched_gt, s[i].proposal_index == 8 ? 1u : 0u);
  const auto again = sample_proposals(props, gts, 4, 0.55, 99);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(again[i].proposal_index, s[i].proposal_index);
}

TEST(SampleProposals, BalanceAndFill) {
  std::mt19937_64 gen(16);
  std::uniform_real_distribution<double> jitter(-0.4, 0.4), far(-45, 45);
  const auto gts = two_gts();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Box3D> props;
    const int npos = static_cast<int>(gen() % 100), nneg = static_cast<int>(gen() % 100) + 1;
    for (int i = 0; i < npos; ++i) props.push_back(Box3D(jitter(gen) * 0.2, jitter(gen) * 0.2, 0.8, 2, 4, 1.6, 0));
    for (int i = 0; i < nneg; ++i) props.push_back(Box3D(far(gen), 40 + far(gen) * 0.1, 0.8, 2, 4, 1.6, 0));
    const auto s = sample_proposals(props, gts, kDefaultProposalSamples, kDefaultPositiveIou, trial);
    std::size_t p = 0;
    std::set<std::size_t> seen;
    for (const auto& x : s) {
      p += x.positive ? 1 : 0;
      EXPECT_TRUE(seen.insert(x.proposal_index).second);
      const double best = std::max(iou_3d(x.proposal, gts[0].box), iou_3d(x.proposal, gts[1].box));
      EXPECT_EQ(x.positive, best >= 0.55);
    }
    const std::size_t n = s.size() - p;
    EXPECT_LE(s.size(), 128u);
    EXPECT_EQ(s.size(), std::min<std::size_t>(128, props.size()));
    if (p < 64) EXPECT_EQ(p, static_cast<std::size_t>(npos));
    if (n < 64) EXPECT_EQ(n, static_cast<std::size_t>(nneg));
    if (npos >= 64 && nneg >= 64) {
      EXPECT_EQ(p, 64u);
      EXPECT_EQ(n, 64u);
    }
  }
}

TEST(SampleProposals, Errors) {
  EXPECT_THROW(sample_proposals({}, two_gts(), 4, 0.55, 0), std::invalid_argument);
  const std::vector<Box3D> one{Box3D()};
  EXPECT_THROW(sample_proposals(one, two_gts(), 3, 0.55, 0), std::invalid_argument);
}

}  // namespace
}  // namespace centertrack
