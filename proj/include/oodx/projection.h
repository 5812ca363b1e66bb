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

#ifndef OODX_PROJECTION_H_
#define OODX_PROJECTION_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "oodx/feature_matrix.h"
#include "oodx/geometry.h"

namespace oodx::projection {

enum class Source { kComputed, kPrecomputed };

struct ProjectedPoints {
  std::vector<Point2> coords;
  Source source = Source::kComputed;
  std::uint64_t seed = 0;
  // Set when features were z-scored per dimension before projection.
  bool standardized = false;
};

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  double init_sigma = 1e-4;
  std::uint64_t seed = 0;
};

// Exact (O(N^2) per iteration) t-SNE. Requires N >= 4 and
// perplexity < N / 3 (kInvalidInput). Features are z-scored per dimension
// first. kDegenerateInput if a row's perplexity calibration does not
// converge, which happens when too many rows coincide. Output is centered.
ProjectedPoints Tsne(const FeatureMatrix& features, const TsneOptions& options);

// Per-row precision calibration used by Tsne, exposed for testing. Returns
// the conditional affinities P(j | i) as a row-major N x N matrix, and the
// achieved perplexity of each row.
struct Affinities {
  std::vector<double> conditional;
  std::vector<double> perplexity;
};
Affinities CalibrateAffinities(const FeatureMatrix& standardized, double perplexity);

// Z-scores each column; constant columns are only centered.
FeatureMatrix Standardize(const FeatureMatrix& features);

// CSV with header "x,y", one row per sample. kManifestMismatch if
// expected_rows is given and differs; kParse on malformed cells.
ProjectedPoints LoadPrecomputed(const std::filesystem::path& path,
                                std::optional<int> expected_rows);
// {source: "tsne"|"precomputed", seed, standardized, feature_set}; seed and
// feature_set only for computed projections.
nlohmann::json MetadataJson(const ProjectedPoints& points, const std::string& feature_set);

void SavePrecomputed(const std::filesystem::path& path,
                     std::span<const Point2> coords);

}  // namespace oodx::projection

#endif  // OODX_PROJECTION_H_
