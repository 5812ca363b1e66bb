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


#ifndef OODX_DETECT_H_
#define OODX_DETECT_H_

#include <optional>
#include <string>
#include <vector>

#include "oodx/dataset_io.h"
#include "oodx/metrics.h"
#include "oodx/ood_ensemble.h"

namespace oodx::detect {

struct DetectOptions {
  int n_models = 3;
  // Feature sets to use, in order; empty means all of the dataset's.
  std::vector<std::string> feature_sets;
  std::string prediction_feature_set;
  std::optional<ood::Thresholds> thresholds;
  // Score every row rather than only the test split.
  bool score_all = false;
};

struct DetectResult {
  std::vector<int> test_indices;  // dataset rows scored, in order
  std::vector<ood::Classifier> classifiers;
  ood::ScoreTable scores;
};

// Trains the family on the train split and scores the test split.
DetectResult Detect(const data::Dataset& dataset, const DetectOptions& options);

// Single classifier at C = 1 on one feature set (the first when empty).
DetectOptions SingleModel(const data::Dataset& dataset, std::string feature_set = "");

// Metrics over the scored test rows against the dataset's ground-truth OoD
// flags; kUndefinedMetric
// when the dataset has none.
metrics::EvalResult Evaluate(const data::Dataset& dataset, const DetectResult& result);

std::vector<std::string> TestSampleIds(const data::Dataset& dataset, const DetectResult& result);

}  // namespace oodx::detect

#endif  // OODX_DETECT_H_
