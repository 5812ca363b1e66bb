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

#include "oodx/geometry.h"

#include <algorithm>
#include <limits>

namespace oodx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool Closer(const std::pair<double, int>& a, const std::pair<double, int>& b) {
  return a.first < b.first || (a.first == b.first && a.second < b.second);
}

}  // namespace

BoundingBox BoundingBox::Of(std::span<const Point2> points) {
  BoundingBox box{kInf, kInf, -kInf, -kInf};
  for (const Point2& p : points) {
    box.min_x = std::min(box.min_x, p.x);
    box.min_y = std::min(box.min_y, p.y);
    box.max_x = std::max(box.max_x, p.x);
    box.max_y = std::max(box.max_y, p.y);
  }
  if (points.empty()) box = BoundingBox{};
  return box;
}

SpatialIndex::SpatialIndex(std::span<const Point2> points)
    : points_(points.begin(), points.end()), box_(BoundingBox::Of(points)) {
  // Roughly two points per bucket; a degenerate axis gets a single bucket.
  const double target = std::max(1.0, static_cast<double>(points_.size()) / 2.0);
  const double extent = std::max({box_.width(), box_.height(), 1e-300});
  const bool flat_x = box_.width() <= 1e-9 * extent;
  const bool flat_y = box_.height() <= 1e-9 * extent;
  const double w = flat_x ? extent : box_.width();
  const double h = flat_y ? extent : box_.height();
  const double side = flat_x == flat_y ? std::sqrt(w * h / target)
                                       : (flat_x ? h : w) / target;
  cols_ = flat_x ? 1 : std::clamp(static_cast<int>(std::ceil(w / side)), 1, 2048);
  rows_ = flat_y ? 1 : std::clamp(static_cast<int>(std::ceil(h / side)), 1, 2048);
  cell_w_ = w / cols_;
  cell_h_ = h / rows_;
  buckets_.resize(static_cast<std::size_t>(cols_) * rows_);
  bucket_of_.assign(points_.size(), -1);
  live_ = points_.size();
  for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
    const Point2& p = points_[i];
    const int cx = static_cast<int>(
        std::clamp(std::floor((p.x - box_.min_x) / cell_w_), 0.0, cols_ - 1.0));
    const int cy = static_cast<int>(
        std::clamp(std::floor((p.y - box_.min_y) / cell_h_), 0.0, rows_ - 1.0));
    const int bucket = cy * cols_ + cx;
    buckets_[bucket].push_back(i);
    bucket_of_[i] = bucket;
  }
}

std::vector<std::pair<double, int>> SpatialIndex::KNearest(const Point2& query,
                                                            int k) const {
  k = std::min<int>(k, static_cast<int>(live_));
  std::vector<std::pair<double, int>> found;
  if (k <= 0) return found;
  struct {
    std::vector<std::pair<double, int>>* found;
    int k;
    void Point(int i, double d) { found->emplace_back(d, i); }
    bool Done(double bound) {
      if (static_cast<int>(found->size()) < k) return false;
      std::nth_element(found->begin(), found->begin() + (k - 1), found->end(), Closer);
      found->resize(k);
      return (*found)[k - 1].first < bound;
    }
  } visitor{&found, k};
  VisitRings(query, visitor);
  std::sort(found.begin(), found.end(), Closer);
  found.resize(k);
  return found;
}

void SpatialIndex::Remove(int index) {
  const int bucket = bucket_of_[index];
  if (bucket < 0) return;
  auto& members = buckets_[bucket];
  members.erase(std::find(members.begin(), members.end(), index));
  bucket_of_[index] = -1;
  --live_;
}

}  // namespace oodx
