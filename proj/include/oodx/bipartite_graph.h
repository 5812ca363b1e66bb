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

#ifndef OODX_BIPARTITE_GRAPH_H_
#define OODX_BIPARTITE_GRAPH_H_

#include <cstddef>
#include <span>
#include <vector>

namespace oodx {

struct WeightedEdge {
  int target = 0;
  double weight = 0.0;
};

// Bipartite graph between instance vertices X and grid vertices Y, both of
// size n. Each instance keeps its edges sorted by grid index; each grid
// vertex keeps an unordered list of incident instances.
class SparseBipartiteGraph {
 public:
  SparseBipartiteGraph() = default;
  SparseBipartiteGraph(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }

  std::span<const WeightedEdge> edges_of_x(int x) const { return x_edges_[x]; }
  std::span<const int> neighbors_of_y(int y) const { return y_adj_[y]; }

  int deg_x(int x) const { return static_cast<int>(x_edges_[x].size()); }
  int deg_y(int y) const { return static_cast<int>(y_adj_[y].size()); }

  bool HasEdge(int x, int y) const;
  // Returns the weight of edge (x, y); the edge must exist.
  double Weight(int x, int y) const;

  // Both return false when the operation would be a no-op (duplicate insert
  // or missing edge).
  bool AddEdge(int x, int y, double weight);
  bool RemoveEdge(int x, int y);

  std::size_t edge_count() const { return edge_count_; }
  long long DegreeSum() const;
  bool IsRegular() const;

  bool operator==(const SparseBipartiteGraph& other) const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<WeightedEdge>> x_edges_;
  std::vector<std::vector<int>> y_adj_;
};

}  // namespace oodx

#endif  // OODX_BIPARTITE_GRAPH_H_
