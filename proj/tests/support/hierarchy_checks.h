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


// Independent checks of hierarchy invariants, shared by the unit tests and
// the acceptance runner. Each returns an empty string on success.

#ifndef OODX_TESTS_SUPPORT_HIERARCHY_CHECKS_H_
#define OODX_TESTS_SUPPORT_HIERARCHY_CHECKS_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "oodx/sampling.h"

namespace oodx::testing {

inline int SmallestSide(int v) {
  int r = 1;
  while (r * r < v) ++r;
  return r;
}

// Samples under a node: displayed plus hidden.
inline std::set<int> Universe(const sampling::HierarchyNode& n) {
  std::set<int> u(n.displayed.begin(), n.displayed.end());
  for (const auto& [s, owner] : n.hidden_assignment) u.insert(s);
  return u;
}

inline std::string CheckNode(const sampling::Hierarchy& h, int id,
                             const std::vector<int>& categories) {
  const auto& n = h.node(id);
  const int cap = h.config().max_side * h.config().max_side;
  const std::set<int> shown(n.displayed.begin(), n.displayed.end());
  if (shown.size() != n.displayed.size()) return "duplicate displayed sample";
  if (static_cast<int>(n.displayed.size()) > cap) return "more displayed samples than S^2";
  for (const auto& [s, owner] : n.hidden_assignment) {
    if (shown.contains(s)) return "sample both displayed and hidden";
    if (!shown.contains(owner)) return "hidden sample assigned to a non-displayed sample";
  }
  if (n.universe_size() > cap && static_cast<int>(n.displayed.size()) != cap) {
    return "node over capacity does not fill S^2 cells";
  }
  if (n.universe_size() <= cap && !n.hidden_assignment.empty()) {
    return "node within capacity hides samples";
  }
  const int side = SmallestSide(static_cast<int>(n.displayed.size()));
  if (n.grid_rows != side || n.grid_cols != side) return "grid is not the smallest R x R";
  std::set<int> cells(n.cell_of_displayed.begin(), n.cell_of_displayed.end());
  if (cells.size() != n.displayed.size()) return "two displayed samples share a cell";
  std::map<int, int> counts;
  for (int s : Universe(n)) ++counts[categories[s]];
  if (counts != n.category_counts) return "category counts disagree with a recount";
  if (n.parent >= 0) {
    const auto& p = h.node(n.parent);
    bool listed = false;
    for (int c : p.children) listed = listed || c == id;
    if (!listed) return "child missing from parent's list";
    if (!n.region) return "child without a region";
    // Expected universe and kept set, recomputed from the parent.
    std::set<int> kept, expected;
    for (std::size_t i = 0; i < p.displayed.size(); ++i) {
      const int cell = p.cell_of_displayed[i];
      if (n.region->Contains(cell / p.grid_cols, cell % p.grid_cols)) kept.insert(p.displayed[i]);
    }
    expected = kept;
    for (const auto& [s, owner] : p.hidden_assignment) {
      if (kept.contains(owner)) expected.insert(s);
    }
    if (Universe(n) != expected) return "child universe differs from region + assignees";
    for (int s : kept) {
      if (!shown.contains(s)) return "mental map broken: kept sample not displayed";
    }
  }
  return "";
}

}  // namespace oodx::testing

#endif  // OODX_TESTS_SUPPORT_HIERARCHY_CHECKS_H_
