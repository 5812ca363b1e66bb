/*
 * Copyright 2026 The oodx Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef OODX_GRID_LAYOUT_H_
#define OODX_GRID_LAYOUT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oodx/geometry.h"
#include "oodx/knn_assign.h"

namespace oodx::grid {

// Square m x n grid over the bounding box of the projected points. Cell c
// sits at row c / n, column c % n; rows grow with y.
struct GridSpec {
  int m = 0;
  int n = 0;
  BoundingBox bbox;
  std::vector<Point2> centers;

  int cells() const { return m * n; }
  int row(int cell) const { return cell / n; }
  int col(int cell) const { return cell % n; }
};

struct GridAssignment {
  GridSpec grid;
  std::vector<int> cell_of_sample;
  std::vector<std::optional<int>> sample_of_cell;
  // Sum over real samples of the bbox-normalized distance to their cell.
  double total_cost = 0.0;
  int k_used = 0;
  knn::ApproxReport report;
  std::vector<std::string> warnings;
};

struct LayoutOptions {
  int k = 100;
  bool with_baseline = false;
};

// m = n = ceil(sqrt(n_real)); degenerate bbox axes are widened by 1e-9.
GridSpec MakeGrid(std::span<const Point2> points, int n_real);

// Assigns every point to a distinct cell. Cells beyond the point count are
// absorbed by zero-cost dummy instances. k is clamped to the cell count with
// a warning.
GridAssignment Layout(std::span<const Point2> points, const LayoutOptions& options);

// Points mapped into the unit square spanned by the grid's bbox; centers sit
// at ((c + 0.5) / n, (r + 0.5) / m).
std::vector<Point2> NormalizeToGrid(std::span<const Point2> points, const GridSpec& grid);
std::vector<Point2> UnitCenters(const GridSpec& grid);

// {grid: {m, n}, cells: [{cell, sample_id|null}], total_cost, k, cr?,
// timings?}. `sample_ids` maps point positions to dataset ids. Timings are
// wall-clock and therefore only emitted on request.
nlohmann::json LayoutToJson(const GridAssignment& layout,
                            std::span<const int> sample_ids,
                            bool include_timings);

}  // namespace oodx::grid

#endif  // OODX_GRID_LAYOUT_H_
