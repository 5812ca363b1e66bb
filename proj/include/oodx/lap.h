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

#ifndef OODX_LAP_H_
#define OODX_LAP_H_

#include <cstddef>
#include <vector>

#include "oodx/bipartite_graph.h"

namespace oodx::lap {

// Square matrix of non-negative finite assignment costs, row-major.
class CostMatrix {
 public:
  CostMatrix() = default;
  // Throws kInvalidInput if values.size() != n * n or any entry is negative
  // or non-finite.
  CostMatrix(int n, std::vector<double> values);
  // Throws kInvalidInput for ragged or non-square input.
  static CostMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int n() const { return n_; }
  double operator()(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * n_ + col];
  }
  const double* row(int r) const {
    return values_.data() + static_cast<std::size_t>(r) * n_;
  }

 private:
  int n_ = 0;
  std::vector<double> values_;
};

struct Assignment {
  // perm[i] is the column assigned to row i.
  std::vector<int> perm;
  double total_cost = 0.0;
  // Final column prices of the shortest-augmenting-path solvers. For every
  // row i and column j present in the problem,
  //   w(i, j) - prices[j] >= w(i, perm[i]) - prices[perm[i]].
  // Empty for brute_force.
  std::vector<double> prices;
};

// Jonker-Volgenant: column reduction with reduction transfer, then
// Dijkstra-style shortest augmenting paths. Ties resolve toward the lowest
// column index, so the result is a deterministic function of the input.
Assignment SolveDense(const CostMatrix& costs);

// Same algorithm restricted to the edges of `graph`. Requires every vertex
// to have degree graph.k() (kPrecondition otherwise); reports
// kInfeasibleGraph if an augmenting path cannot be found. On the complete
// graph the permutation matches SolveDense exactly.
Assignment SolveSparse(const SparseBipartiteGraph& graph);

// Exhaustive enumeration over all n! permutations; n <= 9 (kSizeLimit).
Assignment BruteForce(const CostMatrix& costs);

// Sum of costs(i, perm[i]) in row order.
double AssignmentCost(const CostMatrix& costs, const std::vector<int>& perm);

bool IsPermutation(const std::vector<int>& perm);

}  // namespace oodx::lap

#endif  // OODX_LAP_H_
