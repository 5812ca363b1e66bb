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


#include "oodx/sampling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "oodx/error.h"
#include "oodx/grid_layout.h"

namespace oodx::sampling {

namespace {

constexpr int kDensityNeighbors = 10;

std::uint64_t NodeSeed(std::uint64_t seed, int id) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> MinMax(std::vector<double> v) {
  if (v.empty()) return v;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double min = *lo, range = *hi - *lo;
  for (double& x : v) x = range > 0.0 ? (x - min) / range : 1.0;
  return v;
}

nlohmann::json Id(int id, std::span<const std::string> names) {
  if (names.empty()) return id;
  return names[id];
}

}  // namespace

std::vector<int> OodBiasedSample(std::span<const int> candidates,
                                 std::span<const double> scores,
                                 std::span<const Point2> points, int budget,
                                 double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kConfig, "sampling alpha must lie in [0, 1]");
  }
  const int n = static_cast<int>(candidates.size());
  if (budget >= n) return {candidates.begin(), candidates.end()};
  if (budget <= 0) return {};

  std::vector<double> ood(n), sparsity(n);
  std::vector<Point2> local(n);
  for (int i = 0; i < n; ++i) {
    ood[i] = scores[candidates[i]];
    local[i] = points[candidates[i]];
  }
  const SpatialIndex index(local);
  // The query point comes back first, so the 10th neighbour sits at [10].
  const int neighbors = std::min(kDensityNeighbors, n - 1);
  for (int i = 0; i < n; ++i) {
    const auto near = index.KNearest(local[i], neighbors + 1);
    const double r = near.back().first;
    sparsity[i] = r * r;
  }
  ood = MinMax(std::move(ood));
  const double top = *std::max_element(sparsity.begin(), sparsity.end());
  for (double& s : sparsity) s = top > 0.0 ? s / top : 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, int>> keys(n);
  for (int i = 0; i < n; ++i) {
    const double w = alpha * ood[i] + (1.0 - alpha) * sparsity[i];
    double u = unit(rng);
    while (u <= 0.0) u = unit(rng);
    keys[i] = {w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity(), i};
  }
  std::partial_sort(keys.begin(), keys.begin() + budget, keys.end(), [](auto& a, auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<int> positions;
  for (int i = 0; i < budget; ++i) positions.push_back(keys[i].second);
  std::sort(positions.begin(), positions.end());
  std::vector<int> out;
  for (int p : positions) out.push_back(candidates[p]);
  return out;
}

std::vector<int> PickRepresentatives(std::span<const int> displayed,
                                     std::span<const double> scores,
                                     std::span<const Point2> cell_positions,
                                     double min_dist) {
  if (!(min_dist >= 0.0)) throw Error(ErrorCode::kInvalidInput, "min_dist must be >= 0");
  std::vector<int> order(displayed.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[displayed[a]] > scores[displayed[b]];
  });
  std::vector<int> picked;
  std::vector<Point2> placed;
  for (int i : order) {
    bool clear = true;
    for (const Point2& p : placed) {
      if (Distance(p, cell_positions[i]) < min_dist) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    picked.push_back(displayed[i]);
    placed.push_back(cell_positions[i]);
  }
  return picked;
}

Hierarchy::Hierarchy(std::vector<Point2> points, std::vector<double> scores,
                     std::vector<int> categories, const HierarchyConfig& config,
                     std::vector<int> universe)
    : points_(std::move(points)),
      scores_(std::move(scores)),
      categories_(std::move(categories)),
      config_(config) {
  if (scores_.size() != points_.size() || categories_.size() != points_.size()) {
    throw Error(ErrorCode::kInvalidInput, "points, scores and categories differ in length");
  }
  if (config_.max_side < 1 || config_.k < 1 || !(config_.alpha >= 0.0 && config_.alpha <= 1.0)) {
    throw Error(ErrorCode::kConfig, "hierarchy needs max_side >= 1, k >= 1, alpha in [0, 1]");
  }
  if (universe.empty()) {
    universe.resize(points_.size());
    std::iota(universe.begin(), universe.end(), 0);
  }
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  for (int id : universe) {
    if (id < 0 || id >= static_cast<int>(points_.size())) {
      throw Error(ErrorCode::kInvalidInput, "universe names an unknown sample");
    }
  }
  if (universe.empty()) throw Error(ErrorCode::kEmptySelection, "hierarchy over no samples");
  nodes_.push_back(Build(0, -1, std::nullopt, {}, std::move(universe)));
}

const HierarchyNode& Hierarchy::node(int id) const {
  if (id < 0 || id >= size()) {
    throw Error(ErrorCode::kNotFound, "no hierarchy node " + std::to_string(id));
  }
  return nodes_[id];
}

// `kept` is displayed unconditionally; the rest of the display is sampled
// from `pool`, and whatever stays hidden is assigned to its nearest shown
// sample.
HierarchyNode Hierarchy::Build(int id, int parent, std::optional<Region> region,
                               std::vector<int> kept, std::vector<int> pool) {
  HierarchyNode node;
  node.id = id;
  node.parent = parent;
  node.region = region;

  const int capacity = config_.max_side * config_.max_side;
  std::vector<int> displayed = kept;
  const std::vector<int> sampled =
      OodBiasedSample(pool, scores_, points_, capacity - static_cast<int>(kept.size()),
                      config_.alpha, NodeSeed(config_.seed, id));
  displayed.insert(displayed.end(), sampled.begin(), sampled.end());
  std::sort(displayed.begin(), displayed.end());
  node.displayed = displayed;

  std::vector<Point2> shown;
  for (int s : displayed) shown.push_back(points_[s]);
  const SpatialIndex index(shown);
  const std::set<int> is_shown(displayed.begin(), displayed.end());
  for (int s : pool) {
    if (is_shown.contains(s)) continue;
    node.hidden_assignment[s] = displayed[index.KNearest(points_[s], 1).front().second];
  }
  for (int s : displayed) ++node.category_counts[categories_[s]];
  for (const auto& [s, owner] : node.hidden_assignment) ++node.category_counts[categories_[s]];

  const int cells = [&] {
    const grid::GridSpec g = grid::MakeGrid(shown, static_cast<int>(shown.size()));
    return g.cells();
  }();
  const grid::GridAssignment layout =
      grid::Layout(shown, {.k = std::min(config_.k, cells), .with_baseline = false});
  node.grid_rows = layout.grid.m;
  node.grid_cols = layout.grid.n;
  node.cell_of_displayed = layout.cell_of_sample;
  node.total_cost = layout.total_cost;
  node.k_used = layout.k_used;
  return node;
}

int Hierarchy::Zoom(int parent_id, const Region& region) {
  const HierarchyNode& parent = node(parent_id);
  std::vector<int> kept;
  std::set<int> kept_set;
  for (std::size_t i = 0; i < parent.displayed.size(); ++i) {
    const int cell = parent.cell_of_displayed[i];
    if (region.Contains(cell / parent.grid_cols, cell % parent.grid_cols)) {
      kept.push_back(parent.displayed[i]);
      kept_set.insert(parent.displayed[i]);
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptySelection, "the selected region holds no displayed samples");
  }
  std::vector<int> pool;
  for (const auto& [hidden, owner] : parent.hidden_assignment) {
    if (kept_set.contains(owner)) pool.push_back(hidden);
  }
  std::sort(pool.begin(), pool.end());
  const int id = size();
  HierarchyNode child = Build(id, parent_id, region, std::move(kept), std::move(pool));
  nodes_.push_back(std::move(child));
  nodes_[parent_id].children.push_back(id);
  return id;
}

std::vector<int> Hierarchy::Representatives(int id, double min_dist) const {
  const HierarchyNode& n = node(id);
  std::vector<Point2> cells;
  for (int cell : n.cell_of_displayed) {
    cells.push_back({static_cast<double>(cell % n.grid_cols), static_cast<double>(cell / n.grid_cols)});
  }
  return PickRepresentatives(n.displayed, scores_, cells, min_dist);
}

namespace {

nlohmann::json Summary(const HierarchyNode& n) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [category, count] : n.category_counts) counts[std::to_string(category)] = count;
  nlohmann::json region = nullptr;
  if (n.region) {
    region = {{"row0", n.region->row0}, {"col0", n.region->col0},
              {"row1", n.region->row1}, {"col1", n.region->col1}};
  }
  return {{"node_id", n.id},
          {"parent", n.parent < 0 ? nlohmann::json(nullptr) : nlohmann::json(n.parent)},
          {"children", n.children},
          {"region", region},
          {"category_counts", counts},
          {"grid", {{"m", n.grid_rows}, {"n", n.grid_cols}}},
          {"total_cost", n.total_cost},
          {"k", n.k_used},
          {"displayed_count", n.displayed.size()},
          {"sample_count", n.universe_size()}};
}

}  // namespace

nlohmann::json Hierarchy::ToJson() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const HierarchyNode& n : nodes_) nodes.push_back(Summary(n));
  return {{"max_side", config_.max_side}, {"nodes", nodes}};
}

nlohmann::json Hierarchy::NodeToJson(int id, std::span<const std::string> names) const {
  const HierarchyNode& n = node(id);
  nlohmann::json out = Summary(n);
  std::vector<std::optional<int>> occupant(static_cast<std::size_t>(n.grid_rows) * n.grid_cols);
  for (std::size_t i = 0; i < n.displayed.size(); ++i) occupant[n.cell_of_displayed[i]] = n.displayed[i];
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < occupant.size(); ++c) {
    cells.push_back({{"cell", c},
                     {"row", c / n.grid_cols},
                     {"col", c % n.grid_cols},
                     {"sample_id", occupant[c] ? Id(*occupant[c], names) : nlohmann::json(nullptr)}});
  }
  nlohmann::json hidden = nlohmann::json::array();
  for (const auto& [s, owner] : n.hidden_assignment) {
    hidden.push_back({{"sample_id", Id(s, names)}, {"assigned_to", Id(owner, names)}});
  }
  out["cells"] = cells;
  out["hidden"] = hidden;
  return out;
}

}  // namespace oodx::sampling
