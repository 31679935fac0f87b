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
/// \brief Map-view discretization and dense W x L x F feature maps.
#ifndef CENTERTRACK_GRID_HPP_
#define CENTERTRACK_GRID_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "centertrack/geometry.hpp"

namespace centertrack {

/**
 * Detection range and BEV cell size.
 *
 * Continuous grid coordinates are (x - x_min) / cell. Cell (i, j) owns the
 * half-open square [i, i+1) x [j, j+1) for center assignment and its sample
 * point (where its value is stored) sits at grid coordinate (i, j). Rendering,
 * decoding and bilinear sampling all use this one convention.
 */
class GridSpec {
 public:
  GridSpec(double x_min, double x_max, double y_min, double y_max, double cell);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double cell() const { return cell_; }
  /// W: number of cells along x.
  std::size_t num_x() const { return num_x_; }
  /// L: number of cells along y.
  std::size_t num_y() const { return num_y_; }
  std::size_t num_cells() const { return num_x_ * num_y_; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double x_min_;
  double x_max_;
  double y_min_;
  double y_max_;
  double cell_;
  std::size_t num_x_;
  std::size_t num_y_;
};

Vec2 world_to_grid(const GridSpec& spec, double x, double y);
Vec2 grid_to_world(const GridSpec& spec, double gx, double gy);
bool in_bounds(const GridSpec& spec, double gx, double gy);

/// Integer cell index owning a world point: floor of the grid coordinate.
struct CellIndex {
  long ix = 0;
  long iy = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};
CellIndex cell_of(const GridSpec& spec, double x, double y);
bool cell_in_bounds(const GridSpec& spec, const CellIndex& cell);

/// Dense row-major W x L x F array of doubles over a GridSpec. Element
/// (ix, iy, c) lives at ((ix * L) + iy) * F + c.
class FeatureMap {
 public:
  FeatureMap(GridSpec spec, std::size_t channels);
  FeatureMap(GridSpec spec, std::size_t channels, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  std::size_t channels() const { return channels_; }
  std::size_t num_x() const { return spec_.num_x(); }
  std::size_t num_y() const { return spec_.num_y(); }

  double& at(std::size_t ix, std::size_t iy, std::size_t c) { return values_[index(ix, iy, c)]; }
  double at(std::size_t ix, std::size_t iy, std::size_t c) const { return values_[index(ix, iy, c)]; }

  std::span<double> cell(std::size_t ix, std::size_t iy) {
    return {values_.data() + index(ix, iy, 0), channels_};
  }
  std::span<const double> cell(std::size_t ix, std::size_t iy) const {
    return {values_.data() + index(ix, iy, 0), channels_};
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t c) const {
    return (ix * spec_.num_y() + iy) * channels_ + c;
  }

  GridSpec spec_;
  std::size_t channels_;
  std::vector<double> values_;
};

/// Bilinear blend of the four cells around (gx, gy). Coordinates are first
/// clamped to [0, W-1] x [0, L-1]; non-finite coordinates throw
/// std::invalid_argument.
std::vector<double> bilinear(const FeatureMap& map, double gx, double gy);

}  // namespace centertrack

#endif  // CENTERTRACK_GRID_HPP_
