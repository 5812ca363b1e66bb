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


#include "oodx/detect.h"

#include <numeric>

#include "oodx/error.h"

namespace oodx::detect {

DetectResult Detect(const data::Dataset& dataset, const DetectOptions& options) {
  std::vector<std::string> names = options.feature_sets;
  if (names.empty()) {
    for (const FeatureMatrix& f : dataset.features) names.push_back(f.name);
  }
  DetectResult out;
  out.test_indices = dataset.Indices(data::Split::kTest);
  const std::vector<int> train_rows = dataset.Indices(data::Split::kTrain);
  if (train_rows.empty() || out.test_indices.empty()) {
    throw Error(ErrorCode::kInvalidInput, "dataset needs both train and test samples");
  }
  if (options.score_all) {
    out.test_indices.resize(dataset.size());
    std::iota(out.test_indices.begin(), out.test_indices.end(), 0);
  }
  std::vector<FeatureMatrix> train, test;
  for (const std::string& name : names) {
    const FeatureMatrix& all = dataset.Feature(name);
    train.push_back(all.SelectRows(train_rows));
    test.push_back(all.SelectRows(out.test_indices));
  }
  std::vector<int> labels;
  for (int r : train_rows) labels.push_back(dataset.labels[r]);

  const std::vector<double> coefficients = ood::SelectCoefficients(options.n_models);
  // Class count comes from the manifest, not from whichever labels occur.
  for (const FeatureMatrix& f : train) {
    for (double c : coefficients) {
      out.classifiers.push_back(ood::Train(f, labels, dataset.classes(), c));
    }
  }
  ood::ScoreOptions score_options;
  score_options.prediction_feature_set = options.prediction_feature_set;
  score_options.thresholds = options.thresholds;
  out.scores = ood::Score(out.classifiers, test, score_options);
  return out;
}

DetectOptions SingleModel(const data::Dataset& dataset, std::string feature_set) {
  DetectOptions o;
  o.n_models = 1;
  if (feature_set.empty()) feature_set = dataset.features.front().name;
  o.feature_sets = {feature_set};
  return o;
}

metrics::EvalResult Evaluate(const data::Dataset& dataset, const DetectResult& result) {
  if (dataset.is_ood.empty()) {
    throw Error(ErrorCode::kUndefinedMetric, "dataset has no OoD ground truth");
  }
  std::vector<double> scores;
  std::vector<bool> flags;
  for (std::size_t i = 0; i < result.test_indices.size(); ++i) {
    if (dataset.split[result.test_indices[i]] != data::Split::kTest) continue;
    scores.push_back(result.scores.samples[i].ood_score);
    flags.push_back(dataset.is_ood[result.test_indices[i]]);
  }
  return metrics::Evaluate(scores, flags);
}

std::vector<std::string> TestSampleIds(const data::Dataset& dataset, const DetectResult& result) {
  std::vector<std::string> ids;
  for (int r : result.test_indices) ids.push_back(dataset.sample_ids[r]);
  return ids;
}

}  // namespace oodx::detect
