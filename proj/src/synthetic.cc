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


#include "oodx/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "oodx/error.h"

namespace oodx::synthetic {

ClusteredPoints MakeClusteredPoints(int n, int clusters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto in_disk = [&](double radius) {
    const double r = radius * std::sqrt(unit(rng));
    const double t = 2.0 * std::numbers::pi * unit(rng);
    return Point2{r * std::cos(t), r * std::sin(t)};
  };

  // Cluster centres spread over a disk, relaxing the spacing whenever
  // placement keeps failing.
  const double scale = std::sqrt(10.0 / std::max(clusters, 1));
  double spacing = 0.35 * scale;
  std::vector<Point2> centres;
  std::vector<double> radius, weight;
  double total_weight = 0.0;
  int failures = 0;
  while (static_cast<int>(centres.size()) < clusters) {
    const Point2 p = in_disk(0.75);
    bool ok = true;
    for (const Point2& q : centres) ok = ok && Distance(p, q) >= spacing;
    if (!ok) {
      if (++failures % 100 == 0) spacing *= 0.9;
      continue;
    }
    centres.push_back(p);
    radius.push_back((0.2 + 0.2 * unit(rng)) * scale);
    weight.push_back(0.5 + unit(rng));
    total_weight += weight.back();
  }

  // Flat-topped blobs with soft rims, as t-SNE tends to draw classes, plus a
  // scatter of ambiguous samples between them.
  ClusteredPoints out;
  out.points.reserve(n);
  out.cluster.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (clusters == 0 || unit(rng) < 0.05) {
      out.points.push_back(in_disk(1.0));
      out.cluster.push_back(-1);
      continue;
    }
    double pick = unit(rng) * total_weight;
    int c = 0;
    while (c + 1 < clusters && pick > weight[c]) pick -= weight[c++];
    const double r = radius[c] * std::sqrt(unit(rng));
    const double t = 2.0 * std::numbers::pi * unit(rng);
    const double jitter = 0.15 * radius[c];
    out.points.push_back({centres[c].x + r * std::cos(t) + jitter * normal(rng),
                          centres[c].y + r * std::sin(t) + jitter * normal(rng)});
    out.cluster.push_back(c);
  }
  return out;
}

namespace {

// Random orthogonal matrix via Gram-Schmidt on Gaussian columns.
std::vector<double> RandomRotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> q(static_cast<std::size_t>(d) * d);
  for (int c = 0; c < d; ++c) {
    std::vector<double> v(d);
    for (double& x : v) x = normal(rng);
    for (int p = 0; p < c; ++p) {
      double dot = 0.0;
      for (int r = 0; r < d; ++r) dot += v[r] * q[r * d + p];
      for (int r = 0; r < d; ++r) v[r] -= dot * q[r * d + p];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (int r = 0; r < d; ++r) q[r * d + c] = v[r] / norm;
  }
  return q;
}

}  // namespace

data::Dataset MakeColorBiasDataset(const ColorBiasOptions& o) {
  if (o.n_train < 2 || o.n_test < 1 || o.feature_sets < 1 || o.dim < 2) {
    throw Error(ErrorCode::kInvalidInput, "color-bias dataset needs n_train >= 2, n_test >= 1, "
                                          "feature_sets >= 1 and dim >= 2");
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = o.n_train + o.n_test;

  data::Dataset d;
  d.manifest.name = "color-bias";
  d.manifest.n_samples = n;
  d.manifest.classes = {"cat", "dog"};
  d.manifest.labels_path = "labels.csv";
  d.manifest.split_path = "split.csv";
  d.manifest.ood_path = "ood.csv";

  // Latent per sample: shape (class signal), colour (shortcut), nuisance.
  std::vector<double> shape(n), colour(n);
  for (int i = 0; i < n; ++i) {
    const bool train = i < o.n_train;
    const int label = i % 2;
    const double sign = label == 1 ? 1.0 : -1.0;
    const bool swapped = unit(rng) < (train ? o.train_conflict : o.swap_fraction);
    d.sample_ids.push_back((train ? "train" : "test") + std::to_string(i));
    d.labels.push_back(label);
    d.split.push_back(train ? data::Split::kTrain : data::Split::kTest);
    d.is_ood.push_back(!train && swapped);
    shape[i] = sign * 1.0 + 0.8 * normal(rng);
    colour[i] = (swapped ? -sign : sign) * 1.5 + 0.5 * normal(rng);
  }

  for (int f = 0; f < o.feature_sets; ++f) {
    // Colour weight falls from 1 to 0.1 across the sets; shape rises.
    const double t = o.feature_sets == 1 ? 1.0 : static_cast<double>(f) / (o.feature_sets - 1);
    const double colour_weight = 1.0 - 0.9 * t;
    const double shape_weight = 0.2 + 0.8 * t;
    const bool high = t >= 0.5;
    const std::vector<double> rotation = RandomRotation(o.dim, rng);
    std::vector<double> values(static_cast<std::size_t>(n) * o.dim);
    std::vector<double> latent(o.dim);
    for (int i = 0; i < n; ++i) {
      latent[0] = shape_weight * shape[i];
      latent[1] = colour_weight * colour[i];
      for (int k = 2; k < o.dim; ++k) latent[k] = 0.7 * normal(rng);
      for (int r = 0; r < o.dim; ++r) {
        double v = 0.3 * normal(rng);
        for (int k = 0; k < o.dim; ++k) v += rotation[r * o.dim + k] * latent[k];
        values[static_cast<std::size_t>(i) * o.dim + r] = v;
      }
    }
    const std::string name = (high ? "high" : "low") + std::to_string(f);
    d.manifest.feature_sets.push_back({name, o.dim, "features/" + name + ".csv", high ? "high" : "low"});
    d.features.emplace_back(name, n, o.dim, std::move(values));
  }
  // High-level sets first, so the default prediction model is shape-driven.
  std::stable_partition(d.manifest.feature_sets.begin(), d.manifest.feature_sets.end(),
                        [](const data::FeatureSetSpec& s) { return s.level == "high"; });
  std::stable_partition(d.features.begin(), d.features.end(),
                        [](const FeatureMatrix& m) { return m.name.starts_with("high"); });
  return d;
}

LabelledLayout MakeClustersDataset(int n, int clusters, std::uint64_t seed) {
  const ClusteredPoints cp = MakeClusteredPoints(n, clusters, seed);
  std::vector<Point2> centroid(clusters, Point2{0.0, 0.0});
  std::vector<int> count(clusters, 0);
  for (int i = 0; i < n; ++i) {
    if (cp.cluster[i] < 0) continue;
    centroid[cp.cluster[i]].x += cp.points[i].x;
    centroid[cp.cluster[i]].y += cp.points[i].y;
    ++count[cp.cluster[i]];
  }
  for (int c = 0; c < clusters; ++c) {
    if (count[c] > 0) centroid[c] = {centroid[c].x / count[c], centroid[c].y / count[c]};
  }

  LabelledLayout out;
  data::Dataset& d = out.dataset;
  d.manifest.name = "clusters";
  d.manifest.n_samples = n;
  for (int c = 0; c < clusters; ++c) d.manifest.classes.push_back("cluster" + std::to_string(c));
  d.manifest.labels_path = "labels.csv";
  d.manifest.split_path = "split.csv";
  d.manifest.ood_path = "ood.csv";
  d.manifest.precomputed_2d_path = "projection.csv";
  d.manifest.feature_sets.push_back({"xy", 2, "features/xy.csv", "low"});

  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    const bool scattered = cp.cluster[i] < 0;
    int label = cp.cluster[i];
    if (scattered) {
      // Scattered points take the nearest cluster's label and only appear at
      // test time.
      label = 0;
      for (int c = 1; c < clusters; ++c) {
        if (Distance(cp.points[i], centroid[c]) < Distance(cp.points[i], centroid[label])) label = c;
      }
    }
    const bool train = !scattered && unit(rng) < 0.5;
    d.sample_ids.push_back("p" + std::to_string(i));
    d.labels.push_back(label);
    d.split.push_back(train ? data::Split::kTrain : data::Split::kTest);
    d.is_ood.push_back(scattered);
    values.push_back(cp.points[i].x);
    values.push_back(cp.points[i].y);
  }
  d.features.emplace_back("xy", n, 2, std::move(values));
  out.coords = cp.points;
  return out;
}

}  // namespace oodx::synthetic
