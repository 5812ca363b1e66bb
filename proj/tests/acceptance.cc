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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oodx/bench.h"
#include "oodx/dataset_io.h"
#include "oodx/detect.h"
#include "oodx/knn_assign.h"
#include "oodx/lap.h"
#include "oodx/metrics.h"
#include "oodx/ood_ensemble.h"
#include "oodx/sampling.h"
#include "oodx/server.h"
#include "oodx/synthetic.h"
#include "support/hierarchy_checks.h"

namespace oodx {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

std::vector<Point2> RandomPoints(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point2> points(n);
  for (auto& p : points) p = {unit(rng), unit(rng)};
  return points;
}

// 1. Dense JV against exhaustive search.
Outcome LapExactness() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> size(1, 7), cost(0, 20);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<double> values(n * n);
    for (double& v : values) v = cost(rng);
    const lap::CostMatrix costs(n, values);
    if (lap::SolveDense(costs).total_cost != lap::BruteForce(costs).total_cost) ++mismatches;
  }
  const double t = Since(start);
  return {mismatches == 0 && t < 10.0, Fmt("%.0f mismatches in 1000 instances, %.2fs", mismatches, t)};
}

// 2. Greedy repair always reaches a k-regular graph with a perfect matching.
Outcome MarriageRepair() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> n_dist(16, 400), k_dist(2, 8);
  int failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = n_dist(rng);
    const int k = k_dist(rng);
    auto points = RandomPoints(n, rng);
    if (trial % 2 == 0) {
      for (int i = 0; i < n / 2; ++i) points[i] = {points[i].x * 0.2, points[i].y * 0.2};
    }
    const auto centers = RandomPoints(n, rng);
    const knn::LayoutProblem problem{points, centers};
    knn::RepairTrace trace;
    const SparseBipartiteGraph g = knn::Repair(knn::BuildKnnGraph(problem, k), problem, &trace);
    bool ok = g.IsRegular();
    for (int v = 0; v < n; ++v) ok = ok && g.deg_x(v) == k && g.deg_y(v) == k;
    for (const knn::EdgeSwap& s : trace.swaps) ok = ok && s.degree_sum == 2LL * k * n;
    const lap::Assignment a = lap::SolveSparse(g);
    ok = ok && lap::IsPermutation(a.perm);
    for (int x = 0; ok && x < n; ++x) ok = g.HasEdge(x, a.perm[x]);
    failures += !ok;
  }
  const double t = Since(start);
  return {failures == 0 && t < 30.0, Fmt("%.0f failures in 200 instances, %.2fs", failures, t)};
}

const std::vector<bench::LapRow>& BenchRows(double* seconds) {
  static double elapsed = 0.0;
  static const std::vector<bench::LapRow> rows = [] {
    const auto start = Clock::now();
    bench::LapBenchOptions o;
    o.n = 2025;
    o.ks = {50, 100};
    o.trials = 10;
    auto r = bench::RunLapBench(o);
    elapsed = Since(start);
    return r;
  }();
  *seconds = elapsed;
  return rows;
}

// 3. Mean Cr over 10 clustered 45x45 layouts.
Outcome ApproximationQuality() {
  double seconds = 0.0;
  const auto& rows = BenchRows(&seconds);
  std::map<int, double> mean;
  for (const auto& r : rows) mean[r.k] += r.cr / 10.0;
  const bool pass = mean[50] < 1e-2 && mean[100] < 2e-3 && seconds < 120.0;
  return {pass, Fmt("mean Cr k=50 %.3e (< 1e-2), k=100 %.3e (< 2e-3), %.1fs", mean[50], mean[100], seconds)};
}

// 4. kNN matching time against the dense baseline at k=100.
Outcome Speedup() {
  double seconds = 0.0;
  const auto& rows = BenchRows(&seconds);
  double knn = 0.0, dense = 0.0;
  for (const auto& r : rows) {
    if (r.k != 100) continue;
    knn += r.t_knn_seconds;
    dense += r.t_baseline_seconds;
  }
  return {knn * 3.0 <= dense, Fmt("kNN %.2fs vs dense %.2fs over 10 trials (%.2fx)", knn, dense, dense / knn)};
}

// 5. The four-vertex repair example.
Outcome FourVertexTrace() {
  const std::vector<Point2> instances{{0, 2.4}, {0, 1.6}, {0, 1.0}, {0, 0.0}};
  const std::vector<Point2> centers{{1.5, 2.4}, {1.5, 1.6}, {1.5, 1.0}, {1.5, 0.0}};
  const knn::LayoutProblem problem{instances, centers};
  knn::RepairTrace trace;
  const SparseBipartiteGraph g = knn::Repair(knn::BuildKnnGraph(problem, 2), problem, &trace);
  std::set<std::pair<int, int>> removed, added;
  for (const auto& s : trace.swaps) {
    removed.emplace(s.x, s.removed_y);
    added.emplace(s.x, s.added_y);
  }
  const std::set<std::pair<int, int>> want_removed{{0, 1}, {3, 2}}, want_added{{0, 3}, {3, 0}};
  const auto perm = lap::SolveSparse(g).perm;
  const bool pass = removed == want_removed && added == want_added && perm == std::vector<int>{0, 1, 2, 3};
  std::ostringstream detail;
  detail << "deleted";
  for (const auto& [x, y] : removed) detail << " x" << x + 1 << "y" << y + 1;
  detail << ", inserted";
  for (const auto& [x, y] : added) detail << " x" << x + 1 << "y" << y + 1;
  detail << ", matching";
  for (int y : perm) detail << " " << y + 1;
  return {pass, detail.str()};
}

// A classifier whose output is softmax(bias) on every input.
ood::Classifier Fixed(const std::vector<double>& probabilities) {
  ood::Classifier c;
  c.feature_set = "a";
  c.dims = 1;
  c.classes = static_cast<int>(probabilities.size());
  c.weights.assign(c.classes, 0.0);
  for (double p : probabilities) c.weights.push_back(p > 0.0 ? std::log(p) : -800.0);
  c.mean = {0.0};
  c.scale = {1.0};
  return c;
}

// 6. Entropy bounds through the scoring path.
Outcome EntropyContract() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> classes(2, 10), members(1, 6), hot(0, 9);
  std::exponential_distribution<double> expo(1.0);
  const FeatureMatrix test("a", 1, 1, {0.0});
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = classes(rng);
    const int kind = trial % 3;  // unanimous one-hot, uniform, random
    const int c_hot = hot(rng) % k;
    std::vector<ood::Classifier> ensemble;
    const int m = members(rng);
    for (int i = 0; i < m; ++i) {
      std::vector<double> p(k);
      double sum = 0.0;
      for (int c = 0; c < k; ++c) {
        p[c] = kind == 0 ? (c == c_hot ? 1.0 : 0.0) : kind == 1 ? 1.0 : expo(rng);
        sum += p[c];
      }
      for (double& v : p) v /= sum;
      ensemble.push_back(Fixed(p));
    }
    const double score = ood::Score(ensemble, std::span(&test, 1)).samples[0].ood_score;
    const double ln_k = std::log(static_cast<double>(k));
    double violation = std::max({0.0, -score, score - ln_k});
    if (kind == 0) violation = std::max(violation, std::abs(score));
    if (kind == 1) violation = std::max(violation, std::abs(score - ln_k));
    worst = std::max(worst, violation);
  }
  return {worst <= 1e-9, Fmt("worst deviation %.2e over 10^4 ensembles (tolerance 1e-9)", worst)};
}

// Brute-force metric definitions.
double OracleAuroc(const std::vector<double>& s, const std::vector<bool>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!y[i] || y[j]) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

// Rank of i under descending score, earlier index first on ties.
bool Ahead(const std::vector<double>& s, std::size_t j, std::size_t i) {
  return s[j] > s[i] || (s[j] == s[i] && j <= i);
}

double OracleAupr(const std::vector<double>& s, const std::vector<bool>& y) {
  double sum = 0.0, positives = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    positives += 1.0;
    double rank = 0.0, hits = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (Ahead(s, j, i)) {
        rank += 1.0;
        hits += y[j];
      }
    }
    sum += hits / rank;
  }
  return sum / positives;
}

double OraclePrecAtK(const std::vector<double>& s, const std::vector<bool>& y, int k) {
  double hits = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t rank = 0;
    for (std::size_t j = 0; j < s.size(); ++j) rank += Ahead(s, j, i);
    if (static_cast<int>(rank) <= k) hits += y[i];
  }
  return hits / k;
}

// 7. Ensemble ordering on the colour-bias benchmark, and metric oracles.
Outcome EnsembleOrdering() {
  const auto start = Clock::now();
  synthetic::ColorBiasOptions options;  // 1000 + 1000 samples, 6 feature sets
  const data::Dataset d = synthetic::MakeColorBiasDataset(options);
  const auto multi = detect::Evaluate(d, detect::Detect(d, detect::DetectOptions{}));
  const auto single = detect::Evaluate(d, detect::Detect(d, detect::SingleModel(d)));

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(2, 50), level(0, 9);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<double> s(n);
    std::vector<bool> y(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng) / 4.0;  // coarse levels force ties
      y[i] = level(rng) < 4;
    }
    y[0] = true;
    y[1] = false;
    worst = std::max(worst, std::abs(metrics::Auroc(s, y) - OracleAuroc(s, y)));
    worst = std::max(worst, std::abs(metrics::Aupr(s, y) - OracleAupr(s, y)));
    for (int k = 1; k <= n; ++k) {
      worst = std::max(worst, std::abs(metrics::PrecAtK(s, y, k) - OraclePrecAtK(s, y, k)));
    }
  }
  const double t = Since(start);
  const bool pass = multi.auroc >= single.auroc - 0.02 && multi.auroc >= 0.80 && worst <= 1e-12 && t < 120.0;
  return {pass, Fmt("AUROC M-OoD %.4f, S-OoD %.4f; oracle deviation %.1e; %.1fs", multi.auroc, single.auroc,
                    worst, t)};
}

// 8. Objective gradient against central differences.
Outcome GradientCheck() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dims(1, 5), rows(2, 20), classes(2, 4);
  std::uniform_real_distribution<double> log_c(-2.0, 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = classes(rng);
    const int r = rows(rng), c = dims(rng);
    std::vector<double> values(static_cast<std::size_t>(r) * c);
    for (double& v : values) v = normal(rng);
    const FeatureMatrix x("x", r, c, values);
    std::uniform_int_distribution<int> label(0, k - 1);
    std::vector<int> y(r);
    for (int& v : y) v = label(rng);
    const double coefficient = std::pow(10.0, log_c(rng));
    std::vector<double> w(static_cast<std::size_t>(c + 1) * k);
    for (double& v : w) v = normal(rng);
    std::vector<double> analytic(w.size()), scratch(w.size());
    ood::Objective(w, x, y, k, coefficient, analytic);
    double diff = 0.0, norm_a = 0.0, norm_n = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(w[i]));
      std::vector<double> plus = w, minus = w;
      plus[i] += h;
      minus[i] -= h;
      const double numeric = (ood::Objective(plus, x, y, k, coefficient, scratch) -
                              ood::Objective(minus, x, y, k, coefficient, scratch)) / (2.0 * h);
      diff += (analytic[i] - numeric) * (analytic[i] - numeric);
      norm_a += analytic[i] * analytic[i];
      norm_n += numeric * numeric;
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(std::max(norm_a, norm_n)), 1e-12));
  }
  return {worst < 1e-5, Fmt("worst relative error %.2e over 50 instances (< 1e-5)", worst)};
}

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

std::pair<int, int> RegionCounts(const sampling::HierarchyNode& n, const sampling::Region& r) {
  std::set<int> kept;
  for (std::size_t i = 0; i < n.displayed.size(); ++i) {
    const int cell = n.cell_of_displayed[i];
    if (r.Contains(cell / n.grid_cols, cell % n.grid_cols)) kept.insert(n.displayed[i]);
  }
  int hidden = 0;
  for (const auto& [s, owner] : n.hidden_assignment) hidden += kept.contains(owner);
  return {static_cast<int>(kept.size()), hidden};
}

// 9. Zoom arithmetic and hierarchy invariants with a 3x3 display.
Outcome ZoomSemantics() {
  // The worked case: 4 displayed samples in the region with 6 hidden
  // assignees gives 4 + 5 displayed and 1 hidden.
  bool worked = false;
  std::string problem;
  int small_checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && problem.empty(); ++seed) {
    std::mt19937_64 rng(seed);
    const Scene s = RandomScene(30, rng);
    sampling::Hierarchy h(s.points, s.scores, s.categories, {.max_side = 3, .seed = seed});
    for (int r0 = 0; r0 < 3; ++r0)
      for (int r1 = r0; r1 < 3; ++r1)
        for (int c0 = 0; c0 < 3; ++c0)
          for (int c1 = c0; c1 < 3; ++c1) {
            const sampling::Region region{r0, c0, r1, c1};
            const auto [kept, hidden] = RegionCounts(h.node(0), region);
            if (kept == 0) continue;
            const int v = kept + hidden;
            const bool fig = kept == 4 && hidden == 6;
            if (!fig && (v > 9 || small_checked > 2000)) continue;
            const auto& c = h.node(h.Zoom(0, region));
            if (fig) {
              worked = true;
              if (c.displayed.size() != 9 || c.hidden_assignment.size() != 1) problem = "4 + 6 case differs";
            }
            if (v <= 9) {
              ++small_checked;
              const int side = testing::SmallestSide(v);
              if (static_cast<int>(c.displayed.size()) != v || c.grid_rows != side || c.grid_cols != side) {
                problem = "R x R rule broken at V=" + std::to_string(v);
              }
            }
          }
  }
  if (!worked && problem.empty()) problem = "4 kept + 6 hidden configuration not found";

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(5, 150), depth(1, 6);
  int zooms = 0;
  for (int trial = 0; trial < 500 && problem.empty(); ++trial) {
    const Scene s = RandomScene(size(rng), rng);
    sampling::Hierarchy h(s.points, s.scores, s.categories,
                          {.max_side = 3, .seed = static_cast<std::uint64_t>(trial)});
    problem = testing::CheckNode(h, 0, s.categories);
    const int steps = depth(rng);
    for (int step = 0; step < steps && problem.empty(); ++step) {
      std::uniform_int_distribution<int> pick(0, h.size() - 1);
      const int parent = pick(rng);
      const auto& p = h.node(parent);
      std::uniform_int_distribution<int> row(0, p.grid_rows - 1), col(0, p.grid_cols - 1);
      const int r0 = row(rng), r1 = row(rng), c0 = col(rng), c1 = col(rng);
      const sampling::Region region{std::min(r0, r1), std::min(c0, c1), std::max(r0, r1), std::max(c0, c1)};
      if (RegionCounts(p, region).first == 0) continue;
      problem = testing::CheckNode(h, h.Zoom(parent, region), s.categories);
      ++zooms;
    }
  }
  std::ostringstream detail;
  detail << "4 + 6 case " << (worked ? "found" : "missing") << ", " << small_checked
         << " zooms with V <= 9, " << zooms << " zooms in 500 random sequences";
  if (!problem.empty()) detail << "; " << problem;
  return {problem.empty(), detail.str()};
}

// 10. Full API flow against a generated dataset, and byte-identical layouts.
Outcome ApiDeterminism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "oodx_acceptance_api";
  fs::remove_all(root);
  synthetic::ColorBiasOptions o;
  o.n_train = 300;
  o.n_test = 300;
  o.feature_sets = 4;
  const data::Dataset d = synthetic::MakeColorBiasDataset(o);
  data::SaveDataset(d, root / "cb");

  std::vector<std::string> problems;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  server::ServerConfig config;
  config.data_dir = root;
  std::string first_layout;
  for (int run = 0; run < 2; ++run) {
    server::Api api(config);
    auto call = [&](const std::string& method, const std::string& path, const json& body) {
      return api.Handle({method, path, {}, body.is_null() ? "" : body.dump()});
    };
    auto known = [&](const json& node) {
      bool ok = true;
      for (const json& cell : node["cells"]) {
        if (!cell["sample_id"].is_null()) ok = ok && d.IndexOf(cell["sample_id"].get<std::string>()).has_value();
      }
      for (const json& h : node["hidden"]) ok = ok && d.IndexOf(h["sample_id"].get<std::string>()).has_value();
      return ok;
    };

    const json datasets = json::parse(call("GET", "/api/datasets", nullptr).body);
    expect(datasets["datasets"].size() == 1, "dataset listing");
    const server::Response created = call("POST", "/api/sessions", {{"dataset", "color-bias"}});
    expect(created.status == 201, "session creation");
    const std::string s = json::parse(created.body)["session_id"];
    const std::string base = "/api/sessions/" + s;

    const server::Response queued = call("POST", base + "/detect", {{"n_models", 3}});
    expect(queued.status == 202, "detect is queued");
    const std::string job = json::parse(queued.body)["job_id"];
    const json status = json::parse(api.Handle({"GET", "/api/jobs/" + job, {{"wait", "1"}}, ""}).body);
    expect(status["status"] == "succeeded", "detect job succeeds");

    const json scores = json::parse(call("GET", base + "/scores", nullptr).body);
    expect(scores["rows"].size() == 300, "one score row per test sample");
    for (const json& row : scores["rows"]) {
      const double v = row["ood_score"];
      expect(v >= 0.0 && v <= std::log(2.0), "score within [0, ln C]");
    }

    const json request{{"split", "both"}, {"k", 50}, {"seed", 11}, {"max_side", 20}, {"wait", true}};
    const server::Response a = call("POST", base + "/layout", request);
    const server::Response b = call("POST", base + "/layout", request);
    expect(a.status == 200, "layout succeeds");
    expect(a.body == b.body, "repeated layout is byte-identical");
    if (run == 0) first_layout = a.body;
    if (run == 1) expect(a.body == first_layout, "layout identical across server instances");
    const json layout = json::parse(a.body)["layouts"][0];
    expect(known(layout), "layout ids belong to the dataset");

    const json jux = json::parse(call("POST", base + "/layout", {{"mode", "juxtapose"}, {"k", 20}, {"wait", true}}).body);
    std::set<std::string> ids[2];
    for (int i = 0; i < 2; ++i) {
      const json& l = jux["layouts"][i];
      for (const json& cell : l["cells"]) {
        if (cell["sample_id"].is_null()) continue;
        ids[i].insert(cell["sample_id"].get<std::string>());
        expect(cell["split"] == (i == 0 ? "train" : "test"), "juxtaposed grids split by split");
      }
    }
    expect(ids[0].size() == 300 && ids[1].size() == 300, "juxtaposed grids hold each split");

    const json sup = json::parse(call("POST", base + "/layout",
                                      {{"mode", "superpose"}, {"categories", {"cat", "dog"}}, {"k", 20}, {"wait", true}}).body);
    std::set<std::string> marks;
    for (const json& cell : sup["layouts"][0]["cells"]) {
      if (!cell["sample_id"].is_null()) marks.insert(cell["split"].get<std::string>());
    }
    expect(marks == std::set<std::string>{"test", "train"}, "superposed grid marks both splits");

    const std::string zoom = base + "/layouts/" + layout["layout_id"].get<std::string>() + "/zoom";
    const server::Response child =
        call("POST", zoom, {{"region", {{"row0", 0}, {"col0", 0}, {"row1", 9}, {"col1", 9}}}});
    expect(child.status == 200, "zoom succeeds");
    const json node = json::parse(child.body);
    expect(node["parent"] == 0 && known(node), "zoomed node is a child with known ids");
  }
  fs::remove_all(root);
  std::string detail = problems.empty() ? "session, detect, scores, layout x3 modes, zoom; layouts byte-identical"
                                        : problems.front();
  return {problems.empty(), detail};
}

}  // namespace
}  // namespace oodx

int main() {
  using oodx::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"LAP exactness", oodx::LapExactness},
      {"marriage-theorem repair", oodx::MarriageRepair},
      {"approximation quality", oodx::ApproximationQuality},
      {"speedup", oodx::Speedup},
      {"four-vertex repair trace", oodx::FourVertexTrace},
      {"entropy contract", oodx::EntropyContract},
      {"ensemble ordering", oodx::EnsembleOrdering},
      {"gradient check", oodx::GradientCheck},
      {"zoom semantics", oodx::ZoomSemantics},
      {"API determinism", oodx::ApiDeterminism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
