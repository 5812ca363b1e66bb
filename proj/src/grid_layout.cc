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

#include "oodx/grid_layout.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "oodx/error.h"

namespace oodx::grid {

namespace {

constexpr double kDegenerateWidth = 1e-9;

void Widen(double& lo, double& hi) {
  if (hi - lo <= 0.0) {
    lo -= kDegenerateWidth / 2;
    hi += kDegenerateWidth / 2;
  }
}

}  // namespace

GridSpec MakeGrid(std::span<const Point2> points, int n_real) {
  if (n_real < 1) throw Error(ErrorCode::kInvalidInput, "grid needs at least one sample");
  GridSpec grid;
  grid.m = grid.n = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_real))));
  while (grid.m * grid.n < n_real) ++grid.m, ++grid.n;
  while ((grid.m - 1) * (grid.n - 1) >= n_real) --grid.m, --grid.n;
  grid.bbox = BoundingBox::Of(points);
  Widen(grid.bbox.min_x, grid.bbox.max_x);
  Widen(grid.bbox.min_y, grid.bbox.max_y);
  const double cw = grid.bbox.width() / grid.n;
  const double ch = grid.bbox.height() / grid.m;
  grid.centers.reserve(grid.cells());
  for (int r = 0; r < grid.m; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      grid.centers.push_back(
          {grid.bbox.min_x + (c + 0.5) * cw, grid.bbox.min_y + (r + 0.5) * ch});
    }
  }
  return grid;
}

std::vector<Point2> NormalizeToGrid(std::span<const Point2> points,
                                    const GridSpec& grid) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const Point2& p : points) {
    out.push_back({(p.x - grid.bbox.min_x) / grid.bbox.width(),
                   (p.y - grid.bbox.min_y) / grid.bbox.height()});
  }
  return out;
}

std::vector<Point2> UnitCenters(const GridSpec& grid) {
  std::vector<Point2> out;
  out.reserve(grid.cells());
  for (int r = 0; r < grid.m; ++r) {
    for (int c = 0; c < grid.n; ++c) {
      out.push_back({(c + 0.5) / grid.n, (r + 0.5) / grid.m});
    }
  }
  return out;
}

GridAssignment Layout(std::span<const Point2> points, const LayoutOptions& options) {
  if (options.k < 1) throw Error(ErrorCode::kInvalidK, "k must be at least 1");
  for (const Point2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvalidInput, "projected coordinates must be finite");
    }
  }
  const int n_real = static_cast<int>(points.size());
  GridAssignment out;
  out.grid = MakeGrid(points, n_real);
  const int cells = out.grid.cells();
  out.k_used = options.k;
  if (options.k > cells) {
    out.k_used = cells;
    out.warnings.push_back("k=" + std::to_string(options.k) + " clamped to " +
                           std::to_string(cells) + " grid cells");
  }

  const std::vector<Point2> instances = NormalizeToGrid(points, out.grid);
  const std::vector<Point2> centers = UnitCenters(out.grid);
  const knn::LayoutProblem problem{instances, centers};
  knn::ApproxResult solved = knn::ApproxLayout(problem, out.k_used, options.with_baseline);

  out.report = solved.report;
  out.total_cost = solved.assignment.total_cost;
  out.cell_of_sample.assign(solved.assignment.perm.begin(),
                            solved.assignment.perm.begin() + n_real);
  out.sample_of_cell.assign(cells, std::nullopt);
  for (int i = 0; i < n_real; ++i) out.sample_of_cell[out.cell_of_sample[i]] = i;
  return out;
}

nlohmann::json LayoutToJson(const GridAssignment& layout,
                            std::span<const int> sample_ids,
                            bool include_timings) {
  nlohmann::json cells = nlohmann::json::array();
  for (int c = 0; c < layout.grid.cells(); ++c) {
    const auto& sample = layout.sample_of_cell[c];
    nlohmann::json cell{{"cell", c}, {"row", layout.grid.row(c)}, {"col", layout.grid.col(c)}};
    if (sample.has_value()) {
      cell["sample_id"] = sample_ids.empty() ? *sample : sample_ids[*sample];
    } else {
      cell["sample_id"] = nullptr;
    }
    cells.push_back(std::move(cell));
  }
  nlohmann::json out{
      {"grid", {{"m", layout.grid.m}, {"n", layout.grid.n}}},
      {"cells", std::move(cells)},
      {"total_cost", layout.total_cost},
      {"k", layout.k_used},
  };
  if (layout.report.cr.has_value() && std::isfinite(*layout.report.cr)) {
    out["cr"] = *layout.report.cr;
    out["c_opt"] = *layout.report.c_opt;
  }
  if (!layout.warnings.empty()) out["warnings"] = layout.warnings;
  if (include_timings) {
    nlohmann::json timings{{"t_knn_seconds", layout.report.t_seconds}};
    if (layout.report.t_baseline_seconds.has_value()) {
      timings["t_baseline_seconds"] = *layout.report.t_baseline_seconds;
    }
    out["timings"] = std::move(timings);
  }
  return out;
}

}  // namespace oodx::grid
