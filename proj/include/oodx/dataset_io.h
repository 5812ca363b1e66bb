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


#ifndef OODX_DATASET_IO_H_
#define OODX_DATASET_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oodx/feature_matrix.h"

namespace oodx::data {

struct FeatureSetSpec {
  std::string name;
  int dim = 0;
  std::string path;
  std::string level;  // "high", "low" or empty

  bool operator==(const FeatureSetSpec&) const = default;
};

// Paths are relative to the manifest's directory.
struct Manifest {
  std::string name;
  int n_samples = 0;
  std::vector<std::string> classes;
  std::vector<FeatureSetSpec> feature_sets;
  std::string labels_path;
  std::string split_path;
  std::optional<std::string> ood_path;  // sample_id,is_ood ground truth
  std::optional<std::string> image_dir;
  std::optional<std::string> saliency_dir;
  std::optional<std::string> precomputed_2d_path;

  // kParse on missing or mistyped fields.
  static Manifest FromJson(const nlohmann::json& json);
  nlohmann::json ToJson() const;

  bool operator==(const Manifest&) const = default;
};

enum class Split { kTrain, kTest };

struct Dataset {
  Manifest manifest;
  std::filesystem::path root;
  std::vector<std::string> sample_ids;
  std::vector<int> labels;
  std::vector<Split> split;
  std::vector<bool> is_ood;  // empty without ground truth
  std::vector<FeatureMatrix> features;

  int size() const { return static_cast<int>(sample_ids.size()); }
  int classes() const { return static_cast<int>(manifest.classes.size()); }
  // kNotFound for unknown names.
  const FeatureMatrix& Feature(std::string_view name) const;
  std::vector<int> Indices(Split which) const;
  std::optional<int> IndexOf(std::string_view sample_id) const;
  std::filesystem::path Resolve(const std::string& relative) const { return root / relative; }
};

// Sample ids double as file names, so only [A-Za-z0-9_.-] is accepted and a
// leading dot is refused.
bool IsValidSampleId(std::string_view id);

// Reads and cross-checks every file the manifest names. All problems found
// are reported together in one error whose code is that of the first.
Dataset LoadDataset(const std::filesystem::path& manifest_path);

// Writes manifest.json plus every referenced CSV under `dir`.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir);

// CSV with header f0..f{D-1}.
std::string FeaturesCsv(const FeatureMatrix& features);

enum class ArtifactKind { kLayout, kScores, kHierarchy };

// kInvalidKind for anything but layout, scores or hierarchy.
ArtifactKind ParseArtifactKind(std::string_view kind);
std::string_view ArtifactFileName(ArtifactKind kind);

// Writes results/<dataset>/<run_id>/<artifact file>, replacing any previous
// copy, and returns the path.
std::filesystem::path Persist(ArtifactKind kind, const std::string& content,
                              const std::filesystem::path& results_root,
                              const std::string& dataset, const std::string& run_id);

struct ScoreRow {
  std::string sample_id;
  double ood_score = 0.0;
  double ood_score_normalized = 0.0;
  double confidence = 0.0;
  int predicted_class = 0;
  std::string sample_type;

  bool operator==(const ScoreRow&) const = default;
};

std::vector<ScoreRow> LoadScoresCsv(const std::filesystem::path& path);

// Ground truth CSV sample_id,is_ood with flags 0 or 1, in file order.
// kParse on other flags or repeated ids.
std::vector<std::pair<std::string, bool>> LoadOodTruth(const std::filesystem::path& path);

}  // namespace oodx::data

#endif  // OODX_DATASET_IO_H_
