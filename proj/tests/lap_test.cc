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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oodx/error.h"

namespace oodx::lap {
namespace {

CostMatrix RandomIntegerCosts(int n, int max_value, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, max_value);
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  for (double& v : values) v = dist(rng);
  return CostMatrix(n, std::move(values));
}

SparseBipartiteGraph CompleteGraph(const CostMatrix& costs) {
  SparseBipartiteGraph graph(costs.n(), costs.n());
  for (int i = 0; i < costs.n(); ++i) {
    for (int j = 0; j < costs.n(); ++j) graph.AddEdge(i, j, costs(i, j));
  }
  return graph;
}

void ExpectDualCertificate(const CostMatrix& costs, const Assignment& a) {
  ASSERT_EQ(a.prices.size(), static_cast<std::size_t>(costs.n()));
  for (int i = 0; i < costs.n(); ++i) {
    const double own = costs(i, a.perm[i]) - a.prices[a.perm[i]];
    for (int j = 0; j < costs.n(); ++j) {
      EXPECT_GE(costs(i, j) - a.prices[j], own - 1e-9) << i << "," << j;
    }
  }
}

TEST(SolveDense, ZeroDiagonalGivesIdentity) {
  const auto costs = CostMatrix::FromRows({{0, 1}, {1, 0}});
  const Assignment a = SolveDense(costs);
  EXPECT_EQ(a.perm, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.total_cost, 0.0);
}

TEST(SolveDense, SingleEntry) {
  const Assignment a = SolveDense(CostMatrix::FromRows({{3.5}}));
  EXPECT_EQ(a.perm, (std::vector<int>{0}));
  EXPECT_EQ(a.total_cost, 3.5);
}

TEST(SolveDense, EmptyMatrix) {
  const Assignment a = SolveDense(CostMatrix(0, {}));
  EXPECT_TRUE(a.perm.empty());
  EXPECT_EQ(a.total_cost, 0.0);
}

TEST(SolveDense, MatchesBruteForceOnRandom5x5) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const CostMatrix costs = RandomIntegerCosts(5, 20, rng);
    const Assignment a = SolveDense(costs);
    ASSERT_TRUE(IsPermutation(a.perm));
    EXPECT_EQ(a.total_cost, BruteForce(costs).total_cost) << "trial " << trial;
    EXPECT_EQ(a.total_cost, AssignmentCost(costs, a.perm));
  }
}

TEST(SolveDense, DualCertificateHoldsOnRealCosts) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {2, 7, 40, 120}) {
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    for (double& v : values) v = unit(rng);
    const CostMatrix costs(n, values);
    const Assignment a = SolveDense(costs);
    ASSERT_TRUE(IsPermutation(a.perm));
    ExpectDualCertificate(costs, a);
    EXPECT_NEAR(a.total_cost, AssignmentCost(costs, a.perm), 1e-9 * n);
  }
}

TEST(SolveDense, DeterministicUnderTies) {
  const CostMatrix costs(4, std::vector<double>(16, 1.0));
  const Assignment a = SolveDense(costs);
  const Assignment b = SolveDense(costs);
  EXPECT_EQ(a.perm, b.perm);
  EXPECT_EQ(a.total_cost, 4.0);
}

TEST(SolveDense, RejectsInvalidInput) {
  EXPECT_THROW(CostMatrix::FromRows({{1, 2}, {3}}), Error);
  EXPECT_THROW(CostMatrix(2, {1, 2, 3}), Error);
  EXPECT_THROW(CostMatrix::FromRows({{1, NAN}, {0, 1}}), Error);
  EXPECT_THROW(CostMatrix::FromRows({{1, INFINITY}, {0, 1}}), Error);
  EXPECT_THROW(CostMatrix::FromRows({{-1, 0}, {0, 1}}), Error);
  try {
    CostMatrix::FromRows({{1, 2, 3}, {4, 5, 6}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(BruteForce, SmallCases) {
  EXPECT_EQ(BruteForce(CostMatrix::FromRows({{0, 1}, {1, 0}})).total_cost, 0);
  EXPECT_EQ(BruteForce(CostMatrix::FromRows({{5}})).total_cost, 5);
}

TEST(BruteForce, RejectsLargeInstances) {
  try {
    BruteForce(CostMatrix(10, std::vector<double>(100, 0.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeLimit);
  }
}

TEST(BruteForce, AgreesWithDenseOn1000Random6x6) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const CostMatrix costs = RandomIntegerCosts(6, 9, rng);
    ASSERT_EQ(BruteForce(costs).total_cost, SolveDense(costs).total_cost)
        << "trial " << trial;
  }
}

TEST(SolveSparse, CompleteGraphReproducesDensePermutation) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial;
    std::vector<double> values(static_cast<std::size_t>(n) * n);
    for (double& v : values) v = unit(rng);
    const CostMatrix costs(n, values);
    const Assignment dense = SolveDense(costs);
    const Assignment sparse = SolveSparse(CompleteGraph(costs));
    EXPECT_EQ(dense.perm, sparse.perm);
    EXPECT_EQ(dense.total_cost, sparse.total_cost);
  }
}

TEST(SolveSparse, MatchesDenseCostOn50Instances) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const CostMatrix costs = RandomIntegerCosts(30, 100, rng);
    EXPECT_EQ(SolveSparse(CompleteGraph(costs)).total_cost,
              SolveDense(costs).total_cost);
  }
}

TEST(SolveSparse, FourVertexGraphGivesDiagonalMatching) {
  // Instances at x = 0 and grid vertices at x = 1.5, heights as drawn.
  const double heights[] = {2.4, 1.6, 1.0, 0.0};
  auto w = [&](int x, int y) { return std::hypot(1.5, heights[x] - heights[y]); };
  SparseBipartiteGraph graph(4, 2);
  const int edges[4][2] = {{0, 3}, {1, 2}, {1, 2}, {0, 3}};
  for (int x = 0; x < 4; ++x) {
    for (int y : edges[x]) graph.AddEdge(x, y, w(x, y));
  }
  const Assignment a = SolveSparse(graph);
  EXPECT_EQ(a.perm, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(a.total_cost, 6.0);
}

TEST(SolveSparse, CertificateOnGraphEdges) {
  // A 3-regular circulant graph with random weights.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 50;
  SparseBipartiteGraph graph(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int s : {0, 1, 7}) graph.AddEdge(i, (i + s) % n, unit(rng));
  }
  const Assignment a = SolveSparse(graph);
  ASSERT_TRUE(IsPermutation(a.perm));
  for (int i = 0; i < n; ++i) {
    ASSERT_TRUE(graph.HasEdge(i, a.perm[i]));
    const double own = graph.Weight(i, a.perm[i]) - a.prices[a.perm[i]];
    for (const WeightedEdge& e : graph.edges_of_x(i)) {
      EXPECT_GE(e.weight - a.prices[e.target], own - 1e-9);
    }
  }
}

TEST(SolveSparse, RejectsIrregularGraph) {
  SparseBipartiteGraph graph(2, 1);
  graph.AddEdge(0, 0, 1.0);
  graph.AddEdge(1, 0, 1.0);
  try {
    SolveSparse(graph);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPrecondition);
  }
}

}  // namespace
}  // namespace oodx::lap
