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

#ifndef OODX_SYNTHETIC_H_
#define OODX_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "oodx/dataset_io.h"
#include "oodx/geometry.h"

namespace oodx::synthetic {

struct ClusteredPoints {
  std::vector<Point2> points;
  std::vector<int> cluster;
};

// A round cloud of adjoining flat-topped blobs with 5% scattered points
// (cluster -1), shaped like a t-SNE projection of a labelled image set.
ClusteredPoints MakeClusteredPoints(int n, int clusters, std::uint64_t seed);

struct ColorBiasOptions {
  int n_train = 1000;
  int n_test = 1000;
  int feature_sets = 6;
  int dim = 8;
  // Share of test samples whose colour contradicts their class; these are
  // the ground-truth OoD samples.
  double swap_fraction = 0.5;
  // Share of training samples with the contradicting colour.
  double train_conflict = 0.03;
  std::uint64_t seed = 0;
};

// Two classes whose training colour is a shortcut: class 0 is mostly dark,
// class 1 mostly light. Each feature set sees a different blend of shape
// (the true class signal) and colour, from colour-dominated "low" sets to
// shape-dominated "high" sets, mixed by a random rotation plus noise. Test
// samples with swapped colour are flagged OoD.
data::Dataset MakeColorBiasDataset(const ColorBiasOptions& options);

struct LabelledLayout {
  data::Dataset dataset;
  std::vector<Point2> coords;  // written as the precomputed projection
};

// MakeClusteredPoints as a dataset: the 2D points are both the only feature
// set and the projection, clusters are the classes, about half of the
// clustered points are training samples, and the scattered points are test
// samples flagged OoD.
LabelledLayout MakeClustersDataset(int n, int clusters, std::uint64_t seed);

}  // namespace oodx::synthetic

#endif  // OODX_SYNTHETIC_H_
