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


#include "oodx/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oodx/error.h"

namespace oodx::metrics {

namespace {

void Check(std::span<const double> scores, const std::vector<bool>& is_ood) {
  if (scores.size() != is_ood.size()) {
    throw Error(ErrorCode::kInvalidInput, "scores and labels differ in length");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidInput, "non-finite score");
  }
}

// Descending score, ascending index on ties.
std::vector<int> Ranking(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double Auroc(std::span<const double> scores, const std::vector<bool>& is_ood) {
  Check(scores, is_ood);
  const long long positives = std::count(is_ood.begin(), is_ood.end(), true);
  const long long negatives = static_cast<long long>(is_ood.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "AUROC needs both OoD and in-distribution samples");
  }
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  // Twice the Mann-Whitney U statistic, kept integral so the result is exact.
  long long twice_u = 0;
  long long negatives_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    long long pos = 0, neg = 0;
    for (; j < order.size() && scores[order[j]] == scores[order[i]]; ++j) {
      (is_ood[order[j]] ? pos : neg) += 1;
    }
    twice_u += pos * (2 * negatives_below + neg);
    negatives_below += neg;
    i = j;
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(positives * negatives));
}

double Aupr(std::span<const double> scores, const std::vector<bool>& is_ood) {
  Check(scores, is_ood);
  const long long positives = std::count(is_ood.begin(), is_ood.end(), true);
  if (positives == 0) throw Error(ErrorCode::kUndefinedMetric, "AUPR needs OoD samples");
  double sum = 0.0;
  long long hits = 0;
  const std::vector<int> order = Ranking(scores);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (!is_ood[order[rank]]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return sum / static_cast<double>(positives);
}

double PrecAtK(std::span<const double> scores, const std::vector<bool>& is_ood, int k) {
  Check(scores, is_ood);
  if (k < 1 || k > static_cast<int>(scores.size())) {
    throw Error(ErrorCode::kInvalidK, "Prec@K needs 1 <= K <= N, got K=" + std::to_string(k));
  }
  const std::vector<int> order = Ranking(scores);
  int hits = 0;
  for (int i = 0; i < k; ++i) hits += is_ood[order[i]];
  return static_cast<double>(hits) / k;
}

EvalResult Evaluate(std::span<const double> scores, const std::vector<bool>& is_ood,
                    std::span<const int> ks) {
  EvalResult out;
  out.auroc = Auroc(scores, is_ood);
  out.aupr = Aupr(scores, is_ood);
  for (int k : ks) {
    if (k <= static_cast<int>(scores.size())) out.prec_k[k] = PrecAtK(scores, is_ood, k);
  }
  return out;
}

nlohmann::json ResultJson(const EvalResult& result) {
  nlohmann::json prec = nlohmann::json::object();
  for (const auto& [k, value] : result.prec_k) prec[std::to_string(k)] = value;
  return {{"auroc", result.auroc}, {"aupr", result.aupr}, {"prec_k", prec}};
}

nlohmann::json ReportJson(const std::string& dataset,
                          const std::vector<std::pair<std::string, EvalResult>>& rows) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& [name, result] : rows) {
    nlohmann::json entry = ResultJson(result);
    entry["method"] = name;
    methods.push_back(std::move(entry));
  }
  return {{"dataset", dataset}, {"methods", methods}};
}

}  // namespace oodx::metrics
