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
#include <random>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "oodx/error.h"
#include "support/hierarchy_checks.h"

namespace oodx::sampling {
namespace {

using oodx::testing::CheckNode;
using oodx::testing::SmallestSide;

struct Scene {
  std::vector<Point2> points;
  std::vector<double> scores;
  std::vector<int> categories;
};

Scene RandomScene(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> category(0, 3);
  Scene s;
  for (int i = 0; i < n; ++i) {
    s.points.push_back({unit(rng), unit(rng)});
    s.scores.push_back(unit(rng));
    s.categories.push_back(category(rng));
  }
  return s;
}

std::vector<int> Iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Kept displayed samples and their hidden assignees for a region.
std::pair<int, int> RegionCounts(const HierarchyNode& n, const Region& r) {
  std::set<int> kept;
  for (std::size_t i = 0; i < n.displayed.size(); ++i) {
    const int cell = n.cell_of_displayed[i];
    if (r.Contains(cell / n.grid_cols, cell % n.grid_cols)) kept.insert(n.displayed[i]);
  }
  int hidden = 0;
  for (const auto& [s, owner] : n.hidden_assignment) hidden += kept.contains(owner);
  return {static_cast<int>(kept.size()), hidden};
}

std::vector<Region> AllRegions(int rows, int cols) {
  std::vector<Region> out;
  for (int r0 = 0; r0 < rows; ++r0)
    for (int r1 = r0; r1 < rows; ++r1)
      for (int c0 = 0; c0 < cols; ++c0)
        for (int c1 = c0; c1 < cols; ++c1) out.push_back({r0, c0, r1, c1});
  return out;
}

TEST(OodBiasedSample, FullBudgetIsIdentity) {
  std::mt19937_64 rng(1);
  const Scene s = RandomScene(30, rng);
  const std::vector<int> candidates{4, 9, 2, 17};
  EXPECT_EQ(OodBiasedSample(candidates, s.scores, s.points, 4, 0.5, 3), candidates);
  EXPECT_EQ(OodBiasedSample(candidates, s.scores, s.points, 10, 0.5, 3), candidates);
}

TEST(OodBiasedSample, DegenerateWeightsAreCertain) {
  std::mt19937_64 rng(2);
  Scene s = RandomScene(50, rng);
  std::fill(s.scores.begin(), s.scores.end(), 0.0);
  s.scores[23] = 1.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_EQ(OodBiasedSample(Iota(50), s.scores, s.points, 1, 1.0, seed),
              std::vector<int>{23});
  }
}

TEST(OodBiasedSample, DeterministicDistinctOrdered) {
  std::mt19937_64 rng(3);
  const Scene s = RandomScene(200, rng);
  const auto a = OodBiasedSample(Iota(200), s.scores, s.points, 40, 0.5, 77);
  EXPECT_EQ(a, OodBiasedSample(Iota(200), s.scores, s.points, 40, 0.5, 77));
  EXPECT_NE(a, OodBiasedSample(Iota(200), s.scores, s.points, 40, 0.5, 78));
  ASSERT_EQ(a.size(), 40u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::set<int>(a.begin(), a.end()).size(), 40u);
}

TEST(OodBiasedSample, SparseRegionsOverSampled) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  Scene s;
  for (int i = 0; i < 1010; ++i) {
    const bool sparse = i >= 1000;
    const double sd = sparse ? 3.0 : 0.3;
    const double cx = sparse ? 10.0 : 0.0;
    s.points.push_back({cx + sd * normal(rng), sd * normal(rng)});
    s.scores.push_back(0.5);
  }
  double sparse_share = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto picked = OodBiasedSample(Iota(1010), s.scores, s.points, 100, 0.0, seed);
    sparse_share += std::count_if(picked.begin(), picked.end(), [](int i) { return i >= 1000; }) / 100.0;
  }
  sparse_share /= 200;
  EXPECT_GT(sparse_share, 10.0 / 1010.0);
}

TEST(OodBiasedSample, RejectsBadAlpha) {
  std::mt19937_64 rng(5);
  const Scene s = RandomScene(5, rng);
  EXPECT_THROW(OodBiasedSample(Iota(5), s.scores, s.points, 2, 1.5, 0), Error);
}

TEST(PickRepresentatives, Examples) {
  const std::vector<double> scores{0.1, 0.9, 0.5};
  const std::vector<int> displayed{0, 1, 2};
  const std::vector<Point2> cells{{0, 0}, {0, 0}, {5, 5}};
  EXPECT_EQ(PickRepresentatives(displayed, scores, cells, 0.0), (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(PickRepresentatives(displayed, scores, cells, 1.0), (std::vector<int>{1, 2}));
}

TEST(PickRepresentatives, MaximalOnRandomGrid) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> displayed(2025);
  std::vector<double> scores(2025);
  std::vector<Point2> cells(2025);
  for (int i = 0; i < 2025; ++i) {
    displayed[i] = i;
    scores[i] = unit(rng);
    cells[i] = {static_cast<double>(i % 45), static_cast<double>(i / 45)};
  }
  const auto picked = PickRepresentatives(displayed, scores, cells, 4.0);
  const std::set<int> chosen(picked.begin(), picked.end());
  for (std::size_t a = 0; a < picked.size(); ++a) {
    for (std::size_t b = a + 1; b < picked.size(); ++b) {
      EXPECT_GE(Distance(cells[picked[a]], cells[picked[b]]), 4.0);
    }
    if (a > 0) EXPECT_GE(scores[picked[a - 1]], scores[picked[a]]);
  }
  for (int i = 0; i < 2025; ++i) {
    if (chosen.contains(i)) continue;
    bool blocked = false;
    for (int p : picked) {
      blocked = blocked || (Distance(cells[i], cells[p]) < 4.0 && scores[p] >= scores[i]);
    }
    EXPECT_TRUE(blocked) << "sample " << i << " could have been added";
  }
}

TEST(Hierarchy, RootDisplaysAllWhenSmall) {
  std::mt19937_64 rng(7);
  const Scene s = RandomScene(7, rng);
  const Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3});
  EXPECT_EQ(h.node(0).displayed, Iota(7));
  EXPECT_TRUE(h.node(0).hidden_assignment.empty());
  EXPECT_EQ(h.node(0).grid_rows, 3);
  EXPECT_EQ(CheckNode(h, 0, s.categories), "");
}

TEST(Hierarchy, RootSamplesToCapacity) {
  std::mt19937_64 rng(8);
  const Scene s = RandomScene(100, rng);
  const Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3, .seed = 4});
  EXPECT_EQ(h.node(0).displayed.size(), 9u);
  EXPECT_EQ(h.node(0).hidden_assignment.size(), 91u);
  EXPECT_EQ(CheckNode(h, 0, s.categories), "");
  // Hidden samples go to the nearest displayed sample.
  for (const auto& [hidden, owner] : h.node(0).hidden_assignment) {
    for (int d : h.node(0).displayed) {
      EXPECT_LE(Distance(s.points[hidden], s.points[owner]), Distance(s.points[hidden], s.points[d]));
    }
  }
}

TEST(Hierarchy, KeptPlusHiddenArithmetic) {
  // Search seeded scenes for a region with 4 displayed samples and 6 hidden
  // assignees, and for regions with V = 7 and V = 4.
  bool four_six = false, seven = false, four = false;
  for (std::uint64_t seed = 0; seed < 400 && !(four_six && seven && four); ++seed) {
    std::mt19937_64 rng(seed);
    const Scene s = RandomScene(30, rng);
    Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3, .seed = seed});
    for (const Region& r : AllRegions(3, 3)) {
      const auto [kept, hidden] = RegionCounts(h.node(0), r);
      const int v = kept + hidden;
      if (kept == 0) continue;
      const bool want = (kept == 4 && hidden == 6 && !four_six) || (v == 7 && !seven) || (v == 4 && !four);
      if (!want) continue;
      const int child = h.Zoom(0, r);
      const auto& c = h.node(child);
      EXPECT_EQ(CheckNode(h, child, s.categories), "");
      if (kept == 4 && hidden == 6) {
        four_six = true;
        EXPECT_EQ(c.displayed.size(), 9u);  // 4 kept + 5 of the 6 hidden
        EXPECT_EQ(c.hidden_assignment.size(), 1u);
        EXPECT_EQ(c.grid_rows, 3);
      } else if (v == 7) {
        seven = true;
        EXPECT_EQ(c.displayed.size(), 7u);
        EXPECT_EQ(c.grid_rows, 3);
        EXPECT_EQ(c.grid_cols, 3);
      } else {
        four = true;
        EXPECT_EQ(c.displayed.size(), 4u);
        EXPECT_EQ(c.grid_rows, 2);
      }
    }
  }
  EXPECT_TRUE(four_six);
  EXPECT_TRUE(seven);
  EXPECT_TRUE(four);
}

TEST(Hierarchy, RandomZoomSequences) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(5, 150), depth(1, 6);
  int zooms = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Scene s = RandomScene(size(rng), rng);
    Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3, .seed = static_cast<std::uint64_t>(trial)});
    ASSERT_EQ(CheckNode(h, 0, s.categories), "");
    const int steps = depth(rng);
    for (int step = 0; step < steps; ++step) {
      std::uniform_int_distribution<int> pick_node(0, h.size() - 1);
      const int parent = pick_node(rng);
      const auto& p = h.node(parent);
      std::uniform_int_distribution<int> row(0, p.grid_rows - 1), col(0, p.grid_cols - 1);
      int r0 = row(rng), r1 = row(rng), c0 = col(rng), c1 = col(rng);
      const Region region{std::min(r0, r1), std::min(c0, c1), std::max(r0, r1), std::max(c0, c1)};
      if (RegionCounts(p, region).first == 0) {
        EXPECT_THROW(h.Zoom(parent, region), Error);
        continue;
      }
      const int child = h.Zoom(parent, region);
      ++zooms;
      ASSERT_EQ(CheckNode(h, child, s.categories), "") << "trial " << trial;
    }
  }
  EXPECT_GT(zooms, 1000);
}

TEST(Hierarchy, EmptyRegionAndUnknownNode) {
  std::mt19937_64 rng(10);
  const Scene s = RandomScene(5, rng);
  Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3});
  // Five samples on a 3x3 grid leave four cells empty; find one.
  const auto& root = h.node(0);
  std::set<int> used(root.cell_of_displayed.begin(), root.cell_of_displayed.end());
  int empty = 0;
  while (used.contains(empty)) ++empty;
  try {
    h.Zoom(0, {empty / 3, empty % 3, empty / 3, empty % 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySelection);
  }
  try {
    h.Zoom(5, {0, 0, 2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Hierarchy, JsonShape) {
  std::mt19937_64 rng(11);
  const Scene s = RandomScene(40, rng);
  Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3, .seed = 1});
  h.Zoom(0, {0, 0, 2, 2});
  const auto tree = h.ToJson();
  ASSERT_EQ(tree["nodes"].size(), 2u);
  EXPECT_TRUE(tree["nodes"][0]["parent"].is_null());
  EXPECT_EQ(tree["nodes"][1]["parent"], 0);
  EXPECT_EQ(tree["nodes"][0]["grid"]["m"], 3);
  EXPECT_EQ(tree["nodes"][0]["sample_count"], 40);
  std::vector<std::string> names;
  for (int i = 0; i < 40; ++i) names.push_back("img" + std::to_string(i));
  const auto node = h.NodeToJson(0, names);
  EXPECT_EQ(node["cells"].size(), 9u);
  EXPECT_EQ(node["hidden"].size(), 31u);
  EXPECT_TRUE(node["cells"][0]["sample_id"].is_string());
}

}  // namespace
}  // namespace oodx::sampling
