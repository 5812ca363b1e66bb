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

#include "oodx/bipartite_graph.h"

#include <algorithm>

#include "oodx/error.h"

namespace oodx {

namespace {

auto FindEdge(const std::vector<WeightedEdge>& edges, int y) {
  return std::lower_bound(
      edges.begin(), edges.end(), y,
      [](const WeightedEdge& e, int target) { return e.target < target; });
}

}  // namespace

SparseBipartiteGraph::SparseBipartiteGraph(int n, int k)
    : n_(n), k_(k), x_edges_(n), y_adj_(n) {
  if (n < 0) throw Error(ErrorCode::kInvalidInput, "negative graph size");
}

bool SparseBipartiteGraph::HasEdge(int x, int y) const {
  const auto& edges = x_edges_[x];
  auto it = FindEdge(edges, y);
  return it != edges.end() && it->target == y;
}

double SparseBipartiteGraph::Weight(int x, int y) const {
  const auto& edges = x_edges_[x];
  auto it = FindEdge(edges, y);
  if (it == edges.end() || it->target != y) {
    throw Error(ErrorCode::kInvalidInput, "edge does not exist");
  }
  return it->weight;
}

bool SparseBipartiteGraph::AddEdge(int x, int y, double weight) {
  auto& edges = x_edges_[x];
  auto it = FindEdge(edges, y);
  if (it != edges.end() && it->target == y) return false;
  edges.insert(it, WeightedEdge{y, weight});
  y_adj_[y].push_back(x);
  ++edge_count_;
  return true;
}

bool SparseBipartiteGraph::RemoveEdge(int x, int y) {
  auto& edges = x_edges_[x];
  auto it = FindEdge(edges, y);
  if (it == edges.end() || it->target != y) return false;
  edges.erase(it);
  auto& adj = y_adj_[y];
  adj.erase(std::find(adj.begin(), adj.end(), x));
  --edge_count_;
  return true;
}

long long SparseBipartiteGraph::DegreeSum() const {
  long long sum = 0;
  for (int i = 0; i < n_; ++i) sum += deg_x(i) + deg_y(i);
  return sum;
}

bool SparseBipartiteGraph::IsRegular() const {
  for (int i = 0; i < n_; ++i) {
    if (deg_x(i) != k_ || deg_y(i) != k_) return false;
  }
  return true;
}

bool SparseBipartiteGraph::operator==(const SparseBipartiteGraph& other) const {
  if (n_ != other.n_ || k_ != other.k_ || edge_count_ != other.edge_count_) {
    return false;
  }
  for (int i = 0; i < n_; ++i) {
    const auto& a = x_edges_[i];
    const auto& b = other.x_edges_[i];
    if (a.size() != b.size()) return false;
    for (std::size_t e = 0; e < a.size(); ++e) {
      if (a[e].target != b[e].target || a[e].weight != b[e].weight) return false;
    }
  }
  return true;
}

}  // namespace oodx
