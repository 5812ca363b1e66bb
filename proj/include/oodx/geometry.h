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

#ifndef OODX_GEOMETRY_H_
#define OODX_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace oodx {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

inline double Distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }

  static BoundingBox Of(std::span<const Point2> points);
};

// Uniform bucket grid over a point set. Queries expand square rings of
// buckets around the query until no unvisited bucket can hold a closer point.
// All results are ordered by (distance, index), so ties resolve toward the
// lowest point index. Points can be removed, never added.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::span<const Point2> points);

  // The k nearest live points; k is clamped to the live count.
  std::vector<std::pair<double, int>> KNearest(const Point2& query, int k) const;

  // Nearest live point satisfying `accept`, or {inf, -1} if none does.
  template <typename Accept>
  std::pair<double, int> NearestIf(const Point2& query, Accept&& accept) const;

  void Remove(int index);
  std::size_t size() const { return live_; }

 private:
  template <typename Visit>
  void VisitRings(const Point2& query, Visit& visit) const;

  std::vector<Point2> points_;
  std::size_t live_ = 0;
  BoundingBox box_;
  int cols_ = 1;
  int rows_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<std::vector<int>> buckets_;
  std::vector<int> bucket_of_;
};

template <typename Visit>
void SpatialIndex::VisitRings(const Point2& query, Visit& visit) const {
  const int qx = static_cast<int>(std::clamp(
      std::floor((query.x - box_.min_x) / cell_w_), 0.0, cols_ - 1.0));
  const int qy = static_cast<int>(std::clamp(
      std::floor((query.y - box_.min_y) / cell_h_), 0.0, rows_ - 1.0));
  const int max_ring = std::max({qx, cols_ - 1 - qx, qy, rows_ - 1 - qy});
  for (int r = 0; r <= max_ring; ++r) {
    for (int cy = std::max(qy - r, 0); cy <= std::min(qy + r, rows_ - 1); ++cy) {
      const bool edge_row = cy == qy - r || cy == qy + r;
      const int step = (edge_row || r == 0) ? 1 : 2 * r;
      for (int cx = qx - r; cx <= qx + r; cx += step) {
        if (cx < 0 || cx >= cols_) continue;
        for (int i : buckets_[static_cast<std::size_t>(cy) * cols_ + cx]) {
          visit.Point(i, Distance(query, points_[i]));
        }
      }
    }
    // Every point outside rings 0..r lies outside this box.
    const double x0 = box_.min_x + (qx - r) * cell_w_;
    const double x1 = box_.min_x + (qx + r + 1) * cell_w_;
    const double y0 = box_.min_y + (qy - r) * cell_h_;
    const double y1 = box_.min_y + (qy + r + 1) * cell_h_;
    const double bound = std::max(
        0.0, std::min({query.x - x0, x1 - query.x, query.y - y0, y1 - query.y}));
    if (visit.Done(bound)) return;
  }
}

template <typename Accept>
std::pair<double, int> SpatialIndex::NearestIf(const Point2& query,
                                               Accept&& accept) const {
  struct Visitor {
    Accept& accept;
    std::pair<double, int> best{std::numeric_limits<double>::infinity(), -1};
    void Point(int i, double d) {
      if ((d < best.first || (d == best.first && i < best.second)) && accept(i)) {
        best = {d, i};
      }
    }
    bool Done(double bound) const { return best.second >= 0 && best.first < bound; }
  } visitor{accept};
  VisitRings(query, visitor);
  return visitor.best;
}

}  // namespace oodx

#endif  // OODX_GEOMETRY_H_
