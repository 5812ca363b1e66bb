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


#ifndef OODX_OOD_ENSEMBLE_H_
#define OODX_OOD_ENSEMBLE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oodx/feature_matrix.h"

namespace oodx::ood {

// Regularization coefficients 10^e with e = round(linspace(-5, 5, n)),
// deduplicated. n = 1 gives {1}. kInvalidCount outside [1, 11].
std::vector<double> SelectCoefficients(int n_models);

// Multinomial logistic regression. Weights are (D+1) x C row-major with the
// bias in the last row. Inputs are z-scored with the stored statistics.
struct Classifier {
  std::string feature_set;
  double reg_coefficient = 1.0;
  int dims = 0;
  int classes = 0;
  std::vector<double> weights;
  std::vector<double> mean;
  std::vector<double> scale;
  int iterations = 0;
  bool converged = false;

  // Class distribution for one raw (unstandardized) feature row.
  std::vector<double> Predict(std::span<const double> features) const;
};

struct TrainOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 1000;
};

// 0.5 * |W|^2 (bias excluded) + c * sum of cross-entropy over rows of x.
// Writes the gradient into `gradient` (same layout as weights) and returns
// the objective.
double Objective(std::span<const double> weights, const FeatureMatrix& x,
                 std::span<const int> labels, int classes, double c,
                 std::span<double> gradient);

// Mean cross-entropy of a trained classifier over raw feature rows.
double CrossEntropy(const Classifier& classifier, const FeatureMatrix& x,
                    std::span<const int> labels);

// Trains one classifier on raw training features. kDegenerateLabels when the
// labels name fewer than two distinct classes.
Classifier Train(const FeatureMatrix& train, std::span<const int> labels,
                 int classes, double reg_coefficient,
                 const TrainOptions& options = {});

// Every feature set crossed with every coefficient, feature-major. The class
// count is max(label) + 1.
std::vector<Classifier> TrainFamily(std::span<const FeatureMatrix> train,
                                    std::span<const int> labels,
                                    std::span<const double> coefficients,
                                    const TrainOptions& options = {});

enum class SampleType { kKnownUnknown, kUnknownUnknown, kReliable, kNormal, kBoundary };

std::string_view SampleTypeName(SampleType type);

struct Thresholds {
  double ood_hi = 0.0;
  double conf_hi = 0.7;
  double conf_reliable = 0.9;

  static Thresholds Default(int classes);
  // kConfig unless 0 < ood_hi < ln C and 0 < conf_hi <= conf_reliable <= 1.
  void Validate(int classes) const;
};

SampleType ClassifySampleType(double ood_score, double confidence,
                              const Thresholds& thresholds);

// Entropy in nats.
double Entropy(std::span<const double> distribution);

struct SampleScore {
  std::vector<double> avg_dist;
  double ood_score = 0.0;
  double confidence = 0.0;
  int predicted_class = 0;
  SampleType sample_type = SampleType::kNormal;
};

struct ScoreOptions {
  // Classifier that supplies confidence and predicted class: the given
  // feature set (when empty, the first test feature set with classifiers) at the
  // coefficient nearest 1 on a log scale.
  std::string prediction_feature_set;
  std::optional<Thresholds> thresholds;
};

struct ScoreTable {
  int classes = 0;
  int prediction_model = 0;  // index into the classifier list
  Thresholds thresholds;
  std::vector<SampleScore> samples;
};

// Averages the class distributions of all classifiers on the test rows.
// `test` must hold one matrix per feature set used by the classifiers, with
// equal row counts; kConfig otherwise.
ScoreTable Score(std::span<const Classifier> classifiers,
                 std::span<const FeatureMatrix> test, const ScoreOptions& options = {});

// CSV: sample_id,ood_score,ood_score_normalized,confidence,predicted_class,sample_type
std::string ScoresCsv(const ScoreTable& table, std::span<const std::string> sample_ids);

}  // namespace oodx::ood

#endif  // OODX_OOD_ENSEMBLE_H_
