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


#ifndef OODX_METRICS_H_
#define OODX_METRICS_H_

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace oodx::metrics {

// Scores are "higher means more likely OoD". Flags mark the true OoD samples.
// Mismatched lengths or non-finite scores raise kInvalidInput.

// P(score_pos > score_neg) + 0.5 P(equal). kUndefinedMetric unless both
// classes are present.
double Auroc(std::span<const double> scores, const std::vector<bool>& is_ood);

// Average precision over the ranking by descending score, ties broken by
// sample index. kUndefinedMetric without positives.
double Aupr(std::span<const double> scores, const std::vector<bool>& is_ood);

// Fraction of OoD samples among the k highest scores, same ranking as Aupr.
// kInvalidK unless 1 <= k <= N.
double PrecAtK(std::span<const double> scores, const std::vector<bool>& is_ood, int k);

struct EvalResult {
  double auroc = 0.0;
  double aupr = 0.0;
  std::map<int, double> prec_k;
};

// Ks larger than N are skipped.
EvalResult Evaluate(std::span<const double> scores, const std::vector<bool>& is_ood,
                    std::span<const int> ks = std::vector<int>{50, 100, 200});

// {auroc, aupr, prec_k: {"50": ...}}
nlohmann::json ResultJson(const EvalResult& result);

// One row per method, columns AUROC, AUPR and Prec_K.
nlohmann::json ReportJson(const std::string& dataset,
                          const std::vector<std::pair<std::string, EvalResult>>& rows);

}  // namespace oodx::metrics

#endif  // OODX_METRICS_H_
