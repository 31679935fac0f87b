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

#include "centertrack/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace centertrack {
namespace {

std::size_t cell_count(double lo, double hi, double cell, const char* axis) {
  const double n = std::round((hi - lo) / cell);
  if (!(n >= 1.0)) {
    throw std::invalid_argument(std::string("GridSpec: range along ") + axis +
                                " holds less than one cell");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

GridSpec::GridSpec(double x_min, double x_max, double y_min, double y_max, double cell)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), cell_(cell) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max) || !std::isfinite(cell)) {
    throw std::invalid_argument("GridSpec: non-finite parameter");
  }
  if (!(cell > 0.0)) throw std::invalid_argument("GridSpec: cell must be positive");
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("GridSpec: empty range");
  }
  num_x_ = cell_count(x_min, x_max, cell, "x");
  num_y_ = cell_count(y_min, y_max, cell, "y");
}

Vec2 world_to_grid(const GridSpec& spec, double x, double y) {
  return {(x - spec.x_min()) / spec.cell(), (y - spec.y_min()) / spec.cell()};
}

Vec2 grid_to_world(const GridSpec& spec, double gx, double gy) {
  return {spec.x_min() + gx * spec.cell(), spec.y_min() + gy * spec.cell()};
}

bool in_bounds(const GridSpec& spec, double gx, double gy) {
  return gx >= 0.0 && gy >= 0.0 && gx < static_cast<double>(spec.num_x()) &&
         gy < static_cast<double>(spec.num_y());
}

CellIndex cell_of(const GridSpec& spec, double x, double y) {
  const Vec2 g = world_to_grid(spec, x, y);
  return {static_cast<long>(std::floor(g.x)), static_cast<long>(std::floor(g.y))};
}

bool cell_in_bounds(const GridSpec& spec, const CellIndex& cell) {
  return cell.ix >= 0 && cell.iy >= 0 && static_cast<std::size_t>(cell.ix) < spec.num_x() &&
         static_cast<std::size_t>(cell.iy) < spec.num_y();
}

FeatureMap::FeatureMap(GridSpec spec, std::size_t channels)
    : spec_(spec), channels_(channels), values_(spec.num_cells() * channels, 0.0) {
  if (channels == 0) throw std::invalid_argument("FeatureMap: channel count must be positive");
}

FeatureMap::FeatureMap(GridSpec spec, std::size_t channels, std::vector<double> values)
    : spec_(spec), channels_(channels), values_(std::move(values)) {
  if (channels == 0) throw std::invalid_argument("FeatureMap: channel count must be positive");
  if (values_.size() != spec_.num_cells() * channels_) {
    throw std::invalid_argument("FeatureMap: value count does not match W x L x F");
  }
}

bool FeatureMap::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> bilinear(const FeatureMap& map, double gx, double gy) {
  if (!std::isfinite(gx) || !std::isfinite(gy)) {
    throw std::invalid_argument("bilinear: non-finite sample coordinate");
  }
  const double max_x = static_cast<double>(map.num_x() - 1);
  const double max_y = static_cast<double>(map.num_y() - 1);
  gx = std::clamp(gx, 0.0, max_x);
  gy = std::clamp(gy, 0.0, max_y);

  const auto x0 = static_cast<std::size_t>(std::floor(gx));
  const auto y0 = static_cast<std::size_t>(std::floor(gy));
  const std::size_t x1 = std::min(x0 + 1, map.num_x() - 1);
  const std::size_t y1 = std::min(y0 + 1, map.num_y() - 1);
  const double tx = gx - static_cast<double>(x0);
  const double ty = gy - static_cast<double>(y0);

  std::vector<double> out(map.channels());
  const auto c00 = map.cell(x0, y0);
  const auto c10 = map.cell(x1, y0);
  const auto c01 = map.cell(x0, y1);
  const auto c11 = map.cell(x1, y1);
  for (std::size_t c = 0; c < out.size(); ++c) {
    // a + t (b - a) is exact at t = 0 and on constant neighborhoods.
    const double lo = c00[c] + tx * (c10[c] - c00[c]);
    const double hi = c01[c] + tx * (c11[c] - c01[c]);
    out[c] = lo + ty * (hi - lo);
  }
  return out;
}

}  // namespace centertrack
