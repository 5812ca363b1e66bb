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


#include "oodx/ood_ensemble.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "oodx/csv.h"
#include "oodx/error.h"

namespace oodx::ood {

namespace {

constexpr int kHistory = 10;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double InfNorm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Softmax of logits in place; returns log-sum-exp.
double Softmax(std::span<double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    z += v;
  }
  for (double& v : logits) v /= z;
  return top + std::log(z);
}

void Logits(std::span<const double> weights, std::span<const double> x, int classes,
            std::span<double> out) {
  const std::size_t dims = x.size();
  for (int c = 0; c < classes; ++c) out[c] = weights[dims * classes + c];
  for (std::size_t d = 0; d < dims; ++d) {
    const double xd = x[d];
    if (xd == 0.0) continue;
    const double* w = weights.data() + d * classes;
    for (int c = 0; c < classes; ++c) out[c] += w[c] * xd;
  }
}

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer Fit(const FeatureMatrix& x) {
    Standardizer s;
    s.mean.assign(x.cols, 0.0);
    s.scale.assign(x.cols, 1.0);
    if (x.rows == 0) return s;
    for (int c = 0; c < x.cols; ++c) {
      double m = 0.0;
      for (int r = 0; r < x.rows; ++r) m += x(r, c);
      m /= x.rows;
      double v = 0.0;
      for (int r = 0; r < x.rows; ++r) v += (x(r, c) - m) * (x(r, c) - m);
      const double sd = std::sqrt(v / x.rows);
      s.mean[c] = m;
      s.scale[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
  }
};

FeatureMatrix Apply(const FeatureMatrix& x, std::span<const double> mean,
                    std::span<const double> scale) {
  FeatureMatrix out = x;
  for (int r = 0; r < x.rows; ++r) {
    for (int c = 0; c < x.cols; ++c) {
      double& v = out.data[static_cast<std::size_t>(r) * x.cols + c];
      v = (v - mean[c]) / scale[c];
    }
  }
  return out;
}

void CheckLabels(std::span<const int> labels, int rows, int classes) {
  if (static_cast<int>(labels.size()) != rows) {
    throw Error(ErrorCode::kInvalidInput, "label count does not match feature rows");
  }
  std::set<int> distinct;
  for (int y : labels) {
    if (y < 0 || y >= classes) throw Error(ErrorCode::kInvalidInput, "label out of range");
    distinct.insert(y);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kDegenerateLabels,
                "training labels must cover at least two classes");
  }
}

}  // namespace

std::vector<double> SelectCoefficients(int n_models) {
  if (n_models < 1 || n_models > 11) {
    throw Error(ErrorCode::kInvalidCount, "number of models must lie in [1, 11], got " +
                                              std::to_string(n_models));
  }
  if (n_models == 1) return {1.0};
  std::vector<int> exponents;
  for (int i = 0; i < n_models; ++i) {
    const int e = static_cast<int>(std::lround(-5.0 + 10.0 * i / (n_models - 1)));
    if (exponents.empty() || exponents.back() != e) exponents.push_back(e);
  }
  std::vector<double> out;
  for (int e : exponents) out.push_back(std::pow(10.0, e));
  return out;
}

double Objective(std::span<const double> weights, const FeatureMatrix& x,
                 std::span<const int> labels, int classes, double c,
                 std::span<double> gradient) {
  const std::size_t dims = x.cols;
  const std::size_t bias = dims * classes;
  double value = 0.0;
  for (std::size_t i = 0; i < bias; ++i) {
    value += 0.5 * weights[i] * weights[i];
    gradient[i] = weights[i];
  }
  for (int k = 0; k < classes; ++k) gradient[bias + k] = 0.0;

  std::vector<double> p(classes);
  for (int r = 0; r < x.rows; ++r) {
    const auto row = x.row(r);
    Logits(weights, row, classes, p);
    const double logit_y = p[labels[r]];
    const double lse = Softmax(p);
    value += c * (lse - logit_y);
    p[labels[r]] -= 1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double xd = c * row[d];
      if (xd == 0.0) continue;
      double* g = gradient.data() + d * classes;
      for (int k = 0; k < classes; ++k) g[k] += xd * p[k];
    }
    for (int k = 0; k < classes; ++k) gradient[bias + k] += c * p[k];
  }
  return value;
}

std::vector<double> Classifier::Predict(std::span<const double> features) const {
  std::vector<double> z(dims);
  for (int d = 0; d < dims; ++d) z[d] = (features[d] - mean[d]) / scale[d];
  std::vector<double> p(classes);
  Logits(weights, z, classes, p);
  Softmax(p);
  return p;
}

double CrossEntropy(const Classifier& classifier, const FeatureMatrix& x,
                    std::span<const int> labels) {
  double total = 0.0;
  for (int r = 0; r < x.rows; ++r) {
    const auto p = classifier.Predict(x.row(r));
    total -= std::log(std::max(p[labels[r]], std::numeric_limits<double>::min()));
  }
  return x.rows > 0 ? total / x.rows : 0.0;
}

Classifier Train(const FeatureMatrix& train, std::span<const int> labels, int classes,
                 double reg_coefficient, const TrainOptions& options) {
  if (!(reg_coefficient > 0.0) || !std::isfinite(reg_coefficient)) {
    throw Error(ErrorCode::kInvalidInput, "regularization coefficient must be positive");
  }
  if (train.cols < 1) throw Error(ErrorCode::kInvalidInput, "feature set has no columns");
  for (double v : train.data) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidInput, "non-finite value in feature set " + train.name);
    }
  }
  CheckLabels(labels, train.rows, classes);

  const Standardizer standardizer = Standardizer::Fit(train);
  const FeatureMatrix x = Apply(train, standardizer.mean, standardizer.scale);

  Classifier out;
  out.feature_set = train.name;
  out.reg_coefficient = reg_coefficient;
  out.dims = train.cols;
  out.classes = classes;
  out.mean = standardizer.mean;
  out.scale = standardizer.scale;

  // Limited-memory BFGS with Armijo backtracking.
  const std::size_t size = static_cast<std::size_t>(train.cols + 1) * classes;
  std::vector<double> w(size, 0.0), g(size), w_next(size), g_next(size), dir(size);
  double f = Objective(w, x, labels, classes, reg_coefficient, g);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(kHistory);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (InfNorm(g) < options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    for (std::size_t i = 0; i < size; ++i) dir[i] = -g[i];
    const int m = static_cast<int>(s_hist.size());
    for (int j = m - 1; j >= 0; --j) {
      alpha[j] = rho_hist[j] * Dot(s_hist[j], dir);
      for (std::size_t i = 0; i < size; ++i) dir[i] -= alpha[j] * y_hist[j][i];
    }
    if (m > 0) {
      const double gamma = Dot(s_hist[m - 1], y_hist[m - 1]) / Dot(y_hist[m - 1], y_hist[m - 1]);
      for (double& v : dir) v *= gamma;
    }
    for (int j = 0; j < m; ++j) {
      const double beta = rho_hist[j] * Dot(y_hist[j], dir);
      for (std::size_t i = 0; i < size; ++i) dir[i] += (alpha[j] - beta) * s_hist[j][i];
    }
    double slope = Dot(g, dir);
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < size; ++i) dir[i] = -g[i];
      slope = Dot(g, dir);
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = s_hist.empty() ? 1.0 / std::max(1.0, InfNorm(g)) : 1.0;
    double f_next = f;
    bool accepted = false;
    for (int b = 0; b < kMaxBacktracks; ++b) {
      for (std::size_t i = 0; i < size; ++i) w_next[i] = w[i] + step * dir[i];
      f_next = Objective(w_next, x, labels, classes, reg_coefficient, g_next);
      if (f_next <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    // With large C the objective reaches its floating-point floor while the
    // gradient is still above an absolute tolerance; stop once steps no
    // longer lower it.
    if (!accepted || !(f_next < f)) break;

    std::vector<double> s(size), y(size);
    for (std::size_t i = 0; i < size; ++i) {
      s[i] = w_next[i] - w[i];
      y[i] = g_next[i] - g[i];
    }
    const double sy = Dot(s, y);
    if (sy > 1e-12 * std::sqrt(Dot(s, s) * Dot(y, y))) {
      if (static_cast<int>(s_hist.size()) == kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    w.swap(w_next);
    g.swap(g_next);
    f = f_next;
  }
  if (!out.converged && InfNorm(g) < options.gradient_tolerance) out.converged = true;
  out.iterations = iter;
  out.weights = std::move(w);
  return out;
}

std::vector<Classifier> TrainFamily(std::span<const FeatureMatrix> train,
                                    std::span<const int> labels,
                                    std::span<const double> coefficients,
                                    const TrainOptions& options) {
  if (train.empty() || coefficients.empty()) {
    throw Error(ErrorCode::kInvalidInput, "need at least one feature set and coefficient");
  }
  const int classes =
      labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<Classifier> out;
  out.reserve(train.size() * coefficients.size());
  for (const FeatureMatrix& features : train) {
    for (double c : coefficients) out.push_back(Train(features, labels, classes, c, options));
  }
  return out;
}

std::string_view SampleTypeName(SampleType type) {
  switch (type) {
    case SampleType::kKnownUnknown: return "known_unknown";
    case SampleType::kUnknownUnknown: return "unknown_unknown";
    case SampleType::kReliable: return "reliable";
    case SampleType::kNormal: return "normal";
    case SampleType::kBoundary: return "boundary";
  }
  return "normal";
}

Thresholds Thresholds::Default(int classes) {
  Thresholds t;
  t.ood_hi = 0.6 * std::log(static_cast<double>(classes));
  return t;
}

void Thresholds::Validate(int classes) const {
  const double max_entropy = std::log(static_cast<double>(classes));
  const bool ok = ood_hi > 0.0 && ood_hi < max_entropy && conf_hi > 0.0 &&
                  conf_hi <= conf_reliable && conf_reliable <= 1.0;
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid sample-type thresholds: need 0 < ood_hi < ln C = " << max_entropy
        << " and 0 < conf_hi <= conf_reliable <= 1 (got " << ood_hi << ", " << conf_hi
        << ", " << conf_reliable << ")";
    throw Error(ErrorCode::kConfig, msg.str());
  }
}

SampleType ClassifySampleType(double ood_score, double confidence,
                              const Thresholds& thresholds) {
  if (ood_score >= thresholds.ood_hi) {
    return confidence >= thresholds.conf_hi ? SampleType::kUnknownUnknown
                                            : SampleType::kKnownUnknown;
  }
  if (confidence >= thresholds.conf_reliable) return SampleType::kReliable;
  if (confidence < thresholds.conf_hi) return SampleType::kBoundary;
  return SampleType::kNormal;
}

double Entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution) {
    if (p > 0.0) h -= p * std::log(p);
  }
  const double top = std::log(static_cast<double>(distribution.size()));
  return std::clamp(h, 0.0, top);
}

ScoreTable Score(std::span<const Classifier> classifiers,
                 std::span<const FeatureMatrix> test, const ScoreOptions& options) {
  if (classifiers.empty()) throw Error(ErrorCode::kConfig, "no classifiers to score with");
  const int classes = classifiers.front().classes;
  int rows = -1;
  std::vector<const FeatureMatrix*> inputs;
  for (const Classifier& c : classifiers) {
    if (c.classes != classes) {
      throw Error(ErrorCode::kConfig, "classifiers disagree on the class count");
    }
    const auto it = std::find_if(test.begin(), test.end(), [&](const FeatureMatrix& f) {
      return f.name == c.feature_set;
    });
    if (it == test.end()) {
      throw Error(ErrorCode::kConfig, "feature set '" + c.feature_set + "' missing for scoring");
    }
    if (it->cols != c.dims) {
      throw Error(ErrorCode::kConfig, "feature set '" + c.feature_set + "' has " +
                                          std::to_string(it->cols) + " columns, classifier expects " +
                                          std::to_string(c.dims));
    }
    if (rows >= 0 && it->rows != rows) {
      throw Error(ErrorCode::kConfig, "test feature sets differ in row count");
    }
    rows = it->rows;
    inputs.push_back(&*it);
  }

  // Default: the first test feature set that has classifiers.
  std::string designated = options.prediction_feature_set;
  for (std::size_t f = 0; designated.empty() && f < test.size(); ++f) {
    for (const Classifier& c : classifiers) {
      if (c.feature_set == test[f].name) designated = c.feature_set;
    }
  }
  int model = -1;
  for (int i = 0; i < static_cast<int>(classifiers.size()); ++i) {
    if (classifiers[i].feature_set != designated) continue;
    // Ties (0.1 vs 10) go to the smaller coefficient so the pick does not
    // depend on classifier order.
    const auto key = [&](int j) {
      const double c = classifiers[j].reg_coefficient;
      return std::pair(std::abs(std::log10(c)), c);
    };
    if (model < 0 || key(i) < key(model)) model = i;
  }
  if (model < 0) {
    throw Error(ErrorCode::kConfig, "prediction feature set '" + designated + "' not trained");
  }

  ScoreTable table;
  table.classes = classes;
  table.prediction_model = model;
  table.thresholds = options.thresholds.value_or(Thresholds::Default(classes));
  table.thresholds.Validate(classes);
  table.samples.resize(rows);

  const std::size_t count = classifiers.size();
  std::vector<std::vector<double>> per_class(classes, std::vector<double>(count));
  for (int r = 0; r < rows; ++r) {
    std::vector<double> designated_dist;
    for (std::size_t i = 0; i < count; ++i) {
      auto p = classifiers[i].Predict(inputs[i]->row(r));
      for (int c = 0; c < classes; ++c) per_class[c][i] = p[c];
      if (static_cast<int>(i) == model) designated_dist = std::move(p);
    }
    SampleScore& s = table.samples[r];
    s.avg_dist.resize(classes);
    for (int c = 0; c < classes; ++c) {
      // Sorting first makes the sum independent of classifier order.
      std::sort(per_class[c].begin(), per_class[c].end());
      s.avg_dist[c] = std::accumulate(per_class[c].begin(), per_class[c].end(), 0.0) / count;
    }
    s.ood_score = Entropy(s.avg_dist);
    const auto best = std::max_element(designated_dist.begin(), designated_dist.end());
    s.confidence = *best;
    s.predicted_class = static_cast<int>(best - designated_dist.begin());
    s.sample_type = ClassifySampleType(s.ood_score, s.confidence, table.thresholds);
  }
  return table;
}

std::string ScoresCsv(const ScoreTable& table, std::span<const std::string> sample_ids) {
  if (sample_ids.size() != table.samples.size()) {
    throw Error(ErrorCode::kInvalidInput, "sample id count does not match score rows");
  }
  const double max_entropy = std::log(static_cast<double>(table.classes));
  std::string out =
      "sample_id,ood_score,ood_score_normalized,confidence,predicted_class,sample_type\n";
  for (std::size_t i = 0; i < sample_ids.size(); ++i) {
    const SampleScore& s = table.samples[i];
    out += sample_ids[i];
    out += ',' + csv::FormatDouble(s.ood_score);
    out += ',' + csv::FormatDouble(s.ood_score / max_entropy);
    out += ',' + csv::FormatDouble(s.confidence);
    out += ',' + std::to_string(s.predicted_class);
    out += ',';
    out += SampleTypeName(s.sample_type);
    out += '\n';
  }
  return out;
}

}  // namespace oodx::ood
