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


#ifndef OODX_SAMPLING_H_
#define OODX_SAMPLING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oodx/geometry.h"

namespace oodx::sampling {

// Samples are identified by their position in the `points` / `scores`
// arrays handed to each function.

// Weighted sampling without replacement (exponential keys) with weight
//   alpha * ood_i + (1 - alpha) * sparsity_i,
// where ood_i is the min-max normalized score and sparsity_i the squared
// 10-NN radius among the candidates, normalized by its maximum. Returns the
// chosen ids in candidate order. Budgets at or above the candidate count
// return every candidate.
std::vector<int> OodBiasedSample(std::span<const int> candidates,
                                 std::span<const double> scores,
                                 std::span<const Point2> points, int budget,
                                 double alpha, std::uint64_t seed);

// Greedy by descending score (ties: earlier in `displayed`), skipping any
// sample closer than min_dist, in grid cells, to one already picked.
std::vector<int> PickRepresentatives(std::span<const int> displayed,
                                     std::span<const double> scores,
                                     std::span<const Point2> cell_positions,
                                     double min_dist = 3.0);

// Inclusive cell rectangle in a node's grid.
struct Region {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;

  bool Contains(int row, int col) const {
    return row >= row0 && row <= row1 && col >= col0 && col <= col1;
  }
};

struct HierarchyNode {
  int id = 0;
  int parent = -1;
  std::optional<Region> region;  // in the parent's grid
  std::vector<int> displayed;
  std::map<int, int> hidden_assignment;  // hidden id -> displayed id
  std::map<int, int> category_counts;
  int grid_rows = 0;
  int grid_cols = 0;
  std::vector<int> cell_of_displayed;  // parallel to `displayed`
  double total_cost = 0.0;
  int k_used = 0;
  std::vector<int> children;

  int universe_size() const {
    return static_cast<int>(displayed.size() + hidden_assignment.size());
  }
};

struct HierarchyConfig {
  int max_side = 45;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  int k = 100;
};

class Hierarchy {
 public:
  // `universe` lists the samples under the root; empty means all points.
  Hierarchy(std::vector<Point2> points, std::vector<double> scores,
            std::vector<int> categories, const HierarchyConfig& config,
            std::vector<int> universe = {});

  const HierarchyNode& node(int id) const;
  int size() const { return static_cast<int>(nodes_.size()); }
  const HierarchyConfig& config() const { return config_; }

  // Appends a child of `parent_id` for the displayed samples whose cells lie
  // in `region` plus their hidden assignees. kEmptySelection when no
  // displayed sample falls inside; kNotFound for an unknown node.
  int Zoom(int parent_id, const Region& region);

  // Representative picks among a node's displayed samples.
  std::vector<int> Representatives(int id, double min_dist = 3.0) const;

  // Tree summary: node_id, parent, region, category_counts, grid, counts.
  nlohmann::json ToJson() const;
  // One node in full: the summary plus cells and hidden assignments. Sample
  // ids are emitted as `names[id]` when names are given, else as integers.
  nlohmann::json NodeToJson(int id, std::span<const std::string> names = {}) const;

 private:
  HierarchyNode Build(int id, int parent, std::optional<Region> region,
                      std::vector<int> kept, std::vector<int> pool);

  std::vector<Point2> points_;
  std::vector<double> scores_;
  std::vector<int> categories_;
  HierarchyConfig config_;
  std::vector<HierarchyNode> nodes_;
};

}  // namespace oodx::sampling

#endif  // OODX_SAMPLING_H_
