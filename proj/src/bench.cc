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


#include "oodx/bench.h"

#include <algorithm>
#include <chrono>
#include <limits>

#include "oodx/csv.h"
#include "oodx/error.h"
#include "oodx/grid_layout.h"
#include "oodx/knn_assign.h"
#include "oodx/lap.h"
#include "oodx/synthetic.h"

namespace oodx::bench {

namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<LapRow> RunLapBench(const LapBenchOptions& options) {
  if (options.n < 1 || options.trials < 1 || options.clusters < 1 || options.ks.empty()) {
    throw Error(ErrorCode::kInvalidInput, "bench needs n, trials, clusters >= 1 and at least one k");
  }
  for (int k : options.ks) {
    if (k < 1) throw Error(ErrorCode::kInvalidK, "k must be at least 1");
  }
  std::vector<LapRow> rows;
  for (int trial = 0; trial < options.trials; ++trial) {
    const auto data = synthetic::MakeClusteredPoints(options.n, options.clusters, options.seed + trial);
    const grid::GridSpec spec = grid::MakeGrid(data.points, options.n);
    const std::vector<Point2> instances = grid::NormalizeToGrid(data.points, spec);
    const std::vector<Point2> centers = grid::UnitCenters(spec);
    const knn::LayoutProblem problem{instances, centers};

    const auto start = std::chrono::steady_clock::now();
    const double c_opt = lap::SolveDense(knn::DenseCosts(problem)).total_cost;
    const double t_baseline = SecondsSince(start);

    for (int k : options.ks) {
      const knn::ApproxResult approx = knn::ApproxLayout(problem, std::min(k, spec.cells()), false);
      LapRow row;
      row.dataset = "clusters";
      row.n = options.n;
      row.k = k;
      row.trial = trial;
      row.c_k = approx.report.c_k;
      row.c_opt = c_opt;
      row.cr = c_opt > 0.0 ? (row.c_k - c_opt) / c_opt
                           : (row.c_k == c_opt ? 0.0 : std::numeric_limits<double>::infinity());
      row.t_knn_seconds = approx.report.t_seconds;
      row.t_baseline_seconds = t_baseline;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string LapCsv(const std::vector<LapRow>& rows) {
  std::string out = "dataset,N,k,trial,c_k,c_opt,cr,t_knn_seconds,t_baseline_seconds\n";
  for (const LapRow& r : rows) {
    out += r.dataset + ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.trial) + ',' + csv::FormatDouble(r.c_k) + ',' +
           csv::FormatDouble(r.c_opt) + ',' + csv::FormatDouble(r.cr) + ',' +
           csv::FormatDouble(r.t_knn_seconds) + ',' + csv::FormatDouble(r.t_baseline_seconds) + '\n';
  }
  return out;
}

}  // namespace oodx::bench
