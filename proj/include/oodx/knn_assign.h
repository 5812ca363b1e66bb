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

#ifndef OODX_KNN_ASSIGN_H_
#define OODX_KNN_ASSIGN_H_

#include <optional>
#include <span>
#include <vector>

#include "oodx/bipartite_graph.h"
#include "oodx/geometry.h"
#include "oodx/lap.h"

namespace oodx::knn {

// Instances 0..instances.size()-1 are real; instances.size()..N-1 are
// dummies with zero cost to every cell. N = centers.size().
struct LayoutProblem {
  std::span<const Point2> instances;
  std::span<const Point2> centers;

  int size() const { return static_cast<int>(centers.size()); }
  int real_count() const { return static_cast<int>(instances.size()); }
  bool is_dummy(int x) const { return x >= real_count(); }
  double Weight(int x, int y) const {
    return is_dummy(x) ? 0.0 : Distance(instances[x], centers[y]);
  }
};

// Connects every real instance to its k nearest centers (ties to the lower
// center index). Dummies connect to the k centers of lowest degree at the
// time they are added. kInvalidK unless 1 <= k <= N.
SparseBipartiteGraph BuildKnnGraph(const LayoutProblem& problem, int k);
SparseBipartiteGraph BuildKnnGraph(std::span<const Point2> points,
                                   std::span<const Point2> centers, int k);

struct EdgeSwap {
  int x = 0;
  int removed_y = 0;
  int added_y = 0;
  // Recorded after the swap.
  long long degree_sum = 0;
  int unbalanced = 0;  // |Y_>| + |Y_<|
};

struct RepairTrace {
  int initial_unbalanced = 0;
  std::vector<EdgeSwap> swaps;
};

// Greedy modification that moves edges off over-full grid vertices onto
// under-full ones until every vertex has degree k. Instance degrees never
// change. An internal cap of 2kN edge operations turns a logic error into
// kInternal.
SparseBipartiteGraph Repair(SparseBipartiteGraph graph,
                            const LayoutProblem& problem,
                            RepairTrace* trace = nullptr);

struct ApproxReport {
  double c_k = 0.0;
  std::optional<double> c_opt;
  // (c_k - c_opt) / c_opt; zero when both costs are zero.
  std::optional<double> cr;
  // Graph construction, repair and sparse matching.
  double t_seconds = 0.0;
  std::optional<double> t_baseline_seconds;
};

struct ApproxResult {
  lap::Assignment assignment;
  ApproxReport report;
};

lap::CostMatrix DenseCosts(const LayoutProblem& problem);

ApproxResult ApproxLayout(const LayoutProblem& problem, int k, bool with_baseline);
ApproxResult ApproxLayout(std::span<const Point2> points,
                          std::span<const Point2> centers, int k,
                          bool with_baseline);

}  // namespace oodx::knn

#endif  // OODX_KNN_ASSIGN_H_
