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

#include "oodx/lap.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "oodx/error.h"

namespace oodx::lap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kBruteForceLimit = 9;

void CheckEntry(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::kInvalidInput,
                "assignment costs must be finite and non-negative");
  }
}

struct DenseAccess {
  const CostMatrix& costs;

  int n() const { return costs.n(); }

  template <typename F>
  void ForRow(int i, F&& f) const {
    const double* row = costs.row(i);
    for (int j = 0; j < costs.n(); ++j) f(j, row[j]);
  }

  template <typename F>
  void ForCol(int j, F&& f) const {
    for (int i = 0; i < costs.n(); ++i) f(i, costs(i, j));
  }
};

struct SparseAccess {
  const SparseBipartiteGraph& graph;
  // Column-wise view; rows ascending.
  std::vector<std::vector<WeightedEdge>> cols;

  explicit SparseAccess(const SparseBipartiteGraph& g)
      : graph(g), cols(g.n()) {
    for (int i = 0; i < g.n(); ++i) {
      for (const WeightedEdge& e : g.edges_of_x(i)) {
        cols[e.target].push_back(WeightedEdge{i, e.weight});
      }
    }
  }

  int n() const { return graph.n(); }

  template <typename F>
  void ForRow(int i, F&& f) const {
    for (const WeightedEdge& e : graph.edges_of_x(i)) f(e.target, e.weight);
  }

  template <typename F>
  void ForCol(int j, F&& f) const {
    for (const WeightedEdge& e : cols[j]) f(e.target, e.weight);
  }
};

// kHeap selects a binary-heap frontier (sparse graphs); otherwise the
// frontier minimum is found by a linear scan (dense matrices). Both extract
// the lexicographically smallest (distance, column).
template <bool kHeap>
struct Solver {
  using Entry = std::pair<double, int>;

  int n = 0;
  std::vector<int> row_to_col;
  std::vector<int> col_to_row;
  // Cost of the edge currently matched at each row.
  std::vector<double> row_cost;
  std::vector<double> v;

  // Scratch for the shortest-path search, reset per augmentation.
  std::vector<double> dist;
  std::vector<int> pred;
  std::vector<double> pred_cost;
  std::vector<char> done;
  std::vector<int> reached;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  explicit Solver(int size)
      : n(size),
        row_to_col(size, -1),
        col_to_row(size, -1),
        row_cost(size, 0.0),
        v(size, kInf),
        dist(size, kInf),
        pred(size, -1),
        pred_cost(size, 0.0),
        done(size, 0) {}

  template <typename Access>
  std::vector<int> Reduce(const Access& access) {
    for (int j = 0; j < n; ++j) {
      double best = kInf;
      int best_row = -1;
      access.ForCol(j, [&](int i, double c) {
        if (c < best) {
          best = c;
          best_row = i;
        }
      });
      if (best_row < 0) {
        throw Error(ErrorCode::kInfeasibleGraph,
                    "column " + std::to_string(j) + " has no edges");
      }
      v[j] = best;
      if (row_to_col[best_row] < 0) {
        row_to_col[best_row] = j;
        col_to_row[j] = best_row;
        row_cost[best_row] = best;
      }
    }
    // Reduction transfer: lower the price of each matched column by the
    // slack of the row's second-best option.
    std::vector<int> free_rows;
    for (int i = 0; i < n; ++i) {
      const int own = row_to_col[i];
      if (own < 0) {
        free_rows.push_back(i);
        continue;
      }
      double slack = kInf;
      access.ForRow(i, [&](int j, double c) {
        if (j != own) slack = std::min(slack, c - v[j]);
      });
      if (std::isfinite(slack)) v[own] -= slack;
    }
    return free_rows;
  }

  // Augmenting row reduction: each free row claims the column with the
  // smallest reduced cost, paying the gap to its second-best column, and
  // evicts the previous owner. Two passes, as in the original method.
  template <typename Access>
  std::vector<int> ReduceRows(const Access& access, std::vector<int> free_rows) {
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<int> next;
      std::size_t cursor = 0;
      // Bounds the evict-and-retry chains, which can otherwise crawl through
      // tiny price decrements for a very long time.
      long long budget = 0;
      const long long budget_cap = 4LL * static_cast<long long>(free_rows.size());
      while (cursor < free_rows.size()) {
        const int i = free_rows[cursor++];
        const bool may_lower = budget++ < budget_cap;
        double best = kInf, second = kInf;
        double best_cost = 0.0, second_cost = 0.0;
        int best_col = -1, second_col = -1;
        access.ForRow(i, [&](int j, double c) {
          const double h = c - v[j];
          if (h < second) {
            if (h >= best) {
              second = h;
              second_col = j;
              second_cost = c;
            } else {
              second = best;
              second_col = best_col;
              second_cost = best_cost;
              best = h;
              best_col = j;
              best_cost = c;
            }
          }
        });
        if (best_col < 0) {
          throw Error(ErrorCode::kInfeasibleGraph,
                      "row " + std::to_string(i) + " has no edges");
        }
        int col = best_col;
        double cost = best_cost;
        int evicted = col_to_row[col];
        // Only a price drop that survives rounding counts as progress;
        // otherwise the row is treated as tied and the eviction deferred.
        const double lowered = v[col] - (second - best);
        const bool lowers = may_lower && std::isfinite(second) && lowered < v[col];
        if (lowers) {
          v[col] = lowered;
        } else if (may_lower && evicted >= 0 && second_col >= 0) {
          col = second_col;
          cost = second_cost;
          evicted = col_to_row[col];
        }
        if (evicted >= 0) row_to_col[evicted] = -1;
        row_to_col[i] = col;
        col_to_row[col] = i;
        row_cost[i] = cost;
        if (evicted >= 0) {
          if (lowers) {
            free_rows[--cursor] = evicted;
          } else {
            next.push_back(evicted);
          }
        }
      }
      free_rows = std::move(next);
    }
    return free_rows;
  }

  template <typename Access>
  void Relax(const Access& access, int row, double base) {
    access.ForRow(row, [&](int j, double c) {
      if (done[j]) return;
      const double candidate = base + (c - v[j]);
      if (candidate < dist[j]) {
        if (dist[j] == kInf) reached.push_back(j);
        dist[j] = candidate;
        pred[j] = row;
        pred_cost[j] = c;
        if constexpr (kHeap) heap.emplace(candidate, j);
      }
    });
  }

  int PopMin() {
    if constexpr (kHeap) {
      while (!heap.empty()) {
        const auto [d, j] = heap.top();
        heap.pop();
        if (!done[j] && d == dist[j]) return j;
      }
      return -1;
    }
    int best = -1;
    for (int j : reached) {
      if (done[j]) continue;
      if (best < 0 || dist[j] < dist[best] ||
          (dist[j] == dist[best] && j < best)) {
        best = j;
      }
    }
    return best;
  }

  template <typename Access>
  void Augment(const Access& access, int free_row) {
    std::vector<int> finalized;
    Relax(access, free_row, 0.0);
    int end_col = -1;
    while (true) {
      const int j = PopMin();
      if (j < 0) break;
      if (col_to_row[j] < 0) {
        end_col = j;
        break;
      }
      done[j] = 1;
      finalized.push_back(j);
      const int row = col_to_row[j];
      Relax(access, row, dist[j] - (row_cost[row] - v[j]));
    }
    if (end_col < 0) {
      throw Error(ErrorCode::kInfeasibleGraph,
                  "no augmenting path from row " + std::to_string(free_row));
    }
    const double end_dist = dist[end_col];
    for (int j : finalized) v[j] += dist[j] - end_dist;

    int j = end_col;
    while (true) {
      const int i = pred[j];
      const int previous = row_to_col[i];
      row_to_col[i] = j;
      col_to_row[j] = i;
      row_cost[i] = pred_cost[j];
      if (i == free_row) break;
      j = previous;
    }

    for (int r : reached) {
      dist[r] = kInf;
      pred[r] = -1;
      done[r] = 0;
    }
    reached.clear();
    if constexpr (kHeap) heap = {};
  }
};

template <bool kHeap>
Assignment Finish(Solver<kHeap>& solver) {
  Assignment out;
  out.perm = solver.row_to_col;
  out.total_cost = 0.0;
  for (int i = 0; i < solver.n; ++i) out.total_cost += solver.row_cost[i];
  out.prices = std::move(solver.v);
  return out;
}

}  // namespace

CostMatrix::CostMatrix(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
  if (n < 0 || values_.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::kInvalidInput, "cost matrix must be square");
  }
  for (double value : values_) CheckEntry(value);
}

CostMatrix CostMatrix::FromRows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) {
      throw Error(ErrorCode::kInvalidInput, "cost matrix must be square");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return CostMatrix(n, std::move(flat));
}

double AssignmentCost(const CostMatrix& costs, const std::vector<int>& perm) {
  double total = 0.0;
  for (int i = 0; i < costs.n(); ++i) total += costs(i, perm[i]);
  return total;
}

bool IsPermutation(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int j : perm) {
    if (j < 0 || j >= static_cast<int>(perm.size()) || seen[j]) return false;
    seen[j] = 1;
  }
  return true;
}

Assignment SolveDense(const CostMatrix& costs) {
  const int n = costs.n();
  if (n == 0) return {};
  DenseAccess access{costs};
  Solver<false> solver(n);
  for (int row : solver.ReduceRows(access, solver.Reduce(access))) {
    solver.Augment(access, row);
  }
  return Finish(solver);
}

Assignment SolveSparse(const SparseBipartiteGraph& graph) {
  const int n = graph.n();
  for (int i = 0; i < n; ++i) {
    if (graph.deg_x(i) != graph.k() || graph.deg_y(i) != graph.k()) {
      throw Error(ErrorCode::kPrecondition,
                  "sparse assignment requires every vertex degree == k");
    }
    for (const WeightedEdge& e : graph.edges_of_x(i)) CheckEntry(e.weight);
  }
  if (n == 0) return {};
  SparseAccess access(graph);
  Solver<true> solver(n);
  for (int row : solver.ReduceRows(access, solver.Reduce(access))) {
    solver.Augment(access, row);
  }
  return Finish(solver);
}

Assignment BruteForce(const CostMatrix& costs) {
  const int n = costs.n();
  if (n > kBruteForceLimit) {
    throw Error(ErrorCode::kSizeLimit,
                "brute force is limited to n <= 9, got " + std::to_string(n));
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  best.perm = perm;
  best.total_cost = AssignmentCost(costs, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double cost = AssignmentCost(costs, perm);
    if (cost < best.total_cost) {
      best.total_cost = cost;
      best.perm = perm;
    }
  }
  return best;
}

}  // namespace oodx::lap
