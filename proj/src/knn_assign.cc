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

#include "oodx/knn_assign.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>

#include "oodx/error.h"

namespace oodx::knn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this many under-full grid vertices a linear scan beats the ring search.
constexpr std::size_t kLinearScanLimit = 64;

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void CheckK(int k, int n) {
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidK, "k must lie in [1, " + std::to_string(n) +
                                          "], got " + std::to_string(k));
  }
}

class GreedyRepair {
 public:
  GreedyRepair(SparseBipartiteGraph& graph, const LayoutProblem& problem,
               RepairTrace* trace)
      : graph_(graph),
        problem_(problem),
        trace_(trace),
        n_(graph.n()),
        k_(graph.k()),
        under_index_(problem.centers),
        in_under_(n_, 0),
        weight_sum_(n_, 0.0),
        scan_(n_),
        cursor_(n_, 0) {}

  void Run() {
    for (int y = 0; y < n_; ++y) {
      if (graph_.deg_y(y) > k_) {
        PrepareScan(y);
        Push(y);
        ++unbalanced_;
      } else if (graph_.deg_y(y) < k_) {
        in_under_[y] = 1;
        under_.insert(y);
        ++unbalanced_;
      } else {
        under_index_.Remove(y);
      }
    }
    for (int y = 0; y < n_; ++y) {
      if (graph_.deg_y(y) > k_) under_index_.Remove(y);
    }
    if (trace_ != nullptr) trace_->initial_unbalanced = unbalanced_;

    const long long op_cap = 2LL * k_ * n_;
    long long ops = 0;
    while (!over_.empty()) {
      const int y = -std::get<2>(over_.top());
      over_.pop();
      if (!SwapOneEdge(y)) {
        throw Error(ErrorCode::kInternal,
                    "repair found no admissible swap for grid vertex " +
                        std::to_string(y));
      }
      ops += 2;
      if (ops > op_cap) {
        throw Error(ErrorCode::kInternal, "repair exceeded 2kN edge operations");
      }
      if (graph_.deg_y(y) > k_) Push(y);
    }
    if (!under_.empty()) {
      throw Error(ErrorCode::kInternal, "repair left under-full grid vertices");
    }
  }

 private:
  // Edges of an over-full vertex only ever disappear, so one sort suffices:
  // descending weight, ties toward the higher instance index.
  void PrepareScan(int y) {
    auto& scan = scan_[y];
    for (int x : graph_.neighbors_of_y(y)) {
      const double w = graph_.Weight(x, y);
      scan.emplace_back(w, x);
      weight_sum_[y] += w;
    }
    std::sort(scan.begin(), scan.end(), std::greater<>());
  }

  void Push(int y) { over_.emplace(graph_.deg_y(y), weight_sum_[y], -y); }

  // Cheapest under-full grid vertex not yet adjacent to x; -1 if none.
  int FindTarget(int x) const {
    if (problem_.is_dummy(x)) {
      for (int y : under_) {
        if (!graph_.HasEdge(x, y)) return y;
      }
      return -1;
    }
    if (under_.size() <= kLinearScanLimit) {
      std::pair<double, int> best{kInf, -1};
      for (int y : under_) {
        if (graph_.HasEdge(x, y)) continue;
        const double w = problem_.Weight(x, y);
        if (w < best.first) best = {w, y};
      }
      return best.second;
    }
    return under_index_
        .NearestIf(problem_.instances[x],
                   [&](int y) { return !graph_.HasEdge(x, y); })
        .second;
  }

  // The admissible targets of an instance only shrink while repair runs
  // (under-full vertices leave the set, the instance gains neighbours), so
  // an edge whose instance had no target once is skipped for good.
  bool SwapOneEdge(int y) {
    const auto& scan = scan_[y];
    std::size_t& cursor = cursor_[y];
    for (; cursor < scan.size(); ++cursor) {
      const auto [weight, x] = scan[cursor];
      const int target = FindTarget(x);
      if (target < 0) continue;
      ++cursor;
      graph_.RemoveEdge(x, y);
      weight_sum_[y] -= weight;
      graph_.AddEdge(x, target, problem_.Weight(x, target));
      if (graph_.deg_y(y) == k_) --unbalanced_;
      if (graph_.deg_y(target) == k_) {
        in_under_[target] = 0;
        under_.erase(target);
        under_index_.Remove(target);
        --unbalanced_;
      }
      if (trace_ != nullptr) {
        trace_->swaps.push_back(
            EdgeSwap{x, y, target, graph_.DegreeSum(), unbalanced_});
      }
      return true;
    }
    return false;
  }

  SparseBipartiteGraph& graph_;
  const LayoutProblem& problem_;
  RepairTrace* trace_;
  int n_;
  int k_;
  // Holds exactly the under-full grid vertices.
  SpatialIndex under_index_;
  std::vector<char> in_under_;
  std::set<int> under_;
  std::vector<double> weight_sum_;
  std::vector<std::vector<std::pair<double, int>>> scan_;
  std::vector<std::size_t> cursor_;
  // Max-heap on (degree, edge-weight sum, lower index first).
  std::priority_queue<std::tuple<int, double, int>> over_;
  int unbalanced_ = 0;
};

}  // namespace

SparseBipartiteGraph BuildKnnGraph(const LayoutProblem& problem, int k) {
  const int n = problem.size();
  if (problem.real_count() > n) {
    throw Error(ErrorCode::kInvalidInput, "more instances than grid cells");
  }
  CheckK(k, n);
  SparseBipartiteGraph graph(n, k);
  const SpatialIndex index(problem.centers);
  for (int x = 0; x < problem.real_count(); ++x) {
    for (const auto& [distance, y] : index.KNearest(problem.instances[x], k)) {
      graph.AddEdge(x, y, distance);
    }
  }
  if (problem.real_count() < n) {
    std::set<std::pair<int, int>> by_degree;
    for (int y = 0; y < n; ++y) by_degree.emplace(graph.deg_y(y), y);
    std::vector<int> picked;
    for (int x = problem.real_count(); x < n; ++x) {
      picked.clear();
      for (int i = 0; i < k; ++i) {
        picked.push_back(by_degree.begin()->second);
        by_degree.erase(by_degree.begin());
      }
      for (int y : picked) {
        graph.AddEdge(x, y, 0.0);
        by_degree.emplace(graph.deg_y(y), y);
      }
    }
  }
  return graph;
}

SparseBipartiteGraph BuildKnnGraph(std::span<const Point2> points,
                                   std::span<const Point2> centers, int k) {
  if (points.size() != centers.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "instance and grid vertex counts must match");
  }
  return BuildKnnGraph(LayoutProblem{points, centers}, k);
}

SparseBipartiteGraph Repair(SparseBipartiteGraph graph,
                            const LayoutProblem& problem, RepairTrace* trace) {
  GreedyRepair(graph, problem, trace).Run();
  return graph;
}

lap::CostMatrix DenseCosts(const LayoutProblem& problem) {
  const int n = problem.size();
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      values[static_cast<std::size_t>(x) * n + y] = problem.Weight(x, y);
    }
  }
  return lap::CostMatrix(n, std::move(values));
}

ApproxResult ApproxLayout(const LayoutProblem& problem, int k, bool with_baseline) {
  ApproxResult result;
  const auto start = std::chrono::steady_clock::now();
  SparseBipartiteGraph graph = Repair(BuildKnnGraph(problem, k), problem);
  result.assignment = lap::SolveSparse(graph);
  result.report.t_seconds = Seconds(start);
  result.report.c_k = result.assignment.total_cost;

  if (with_baseline) {
    const auto baseline_start = std::chrono::steady_clock::now();
    const lap::Assignment optimal = lap::SolveDense(DenseCosts(problem));
    result.report.t_baseline_seconds = Seconds(baseline_start);
    const double c_opt = optimal.total_cost;
    const double c_k = result.report.c_k;
    result.report.c_opt = c_opt;
    if (c_opt > 0.0) {
      result.report.cr = (c_k - c_opt) / c_opt;
    } else {
      result.report.cr = c_k == c_opt ? 0.0 : kInf;
    }
  }
  return result;
}

ApproxResult ApproxLayout(std::span<const Point2> points,
                          std::span<const Point2> centers, int k,
                          bool with_baseline) {
  if (points.size() != centers.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "instance and grid vertex counts must match");
  }
  return ApproxLayout(LayoutProblem{points, centers}, k, with_baseline);
}

}  // namespace oodx::knn
