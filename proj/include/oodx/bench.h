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


#ifndef OODX_BENCH_H_
#define OODX_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

namespace oodx::bench {

struct LapRow {
  std::string dataset;
  int n = 0;
  int k = 0;
  int trial = 0;
  double c_k = 0.0;
  double c_opt = 0.0;
  double cr = 0.0;
  double t_knn_seconds = 0.0;
  double t_baseline_seconds = 0.0;
};

struct LapBenchOptions {
  int n = 2025;
  std::vector<int> ks{50, 100};
  int trials = 10;
  std::uint64_t seed = 0;
  int clusters = 10;
};

// kNN matching against the dense optimum on synthetic clustered layouts.
// Trial t uses seed + t; the dense baseline is solved once per trial and
// shared by every k.
std::vector<LapRow> RunLapBench(const LapBenchOptions& options);

// dataset,N,k,trial,c_k,c_opt,cr,t_knn_seconds,t_baseline_seconds
std::string LapCsv(const std::vector<LapRow>& rows);

}  // namespace oodx::bench

#endif  // OODX_BENCH_H_
