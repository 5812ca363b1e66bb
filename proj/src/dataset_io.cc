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


#include "oodx/dataset_io.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "oodx/csv.h"
#include "oodx/error.h"

namespace oodx::data {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects validation problems so a broken dataset is reported in one go.
class Problems {
 public:
  void Add(ErrorCode code, std::string message) {
    if (list_.empty()) first_ = code;
    list_.push_back(std::move(message));
  }
  void Add(const Error& e) { Add(e.code(), e.what()); }

  void ThrowIfAny() const {
    if (list_.empty()) return;
    std::string text = std::to_string(list_.size()) + " problem(s): " + list_.front();
    for (std::size_t i = 1; i < list_.size(); ++i) text += "; " + list_[i];
    throw Error(first_, text);
  }

 private:
  ErrorCode first_ = ErrorCode::kInvalidInput;
  std::vector<std::string> list_;
};

template <typename T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kParse, std::string("manifest: missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kParse, std::string("manifest: '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> OptionalField(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return Field<T>(j, key);
}

// Reads a two-column id table and checks ids against the manifest order.
std::optional<csv::Table> IdTable(const fs::path& path, const char* value_column,
                                  const std::vector<std::string>* expected_ids,
                                  int n_samples, Problems& problems) {
  csv::Table table;
  try {
    table = csv::Read(path);
    table.Column("sample_id");
    table.Column(value_column);
  } catch (const Error& e) {
    problems.Add(e);
    return std::nullopt;
  }
  if (static_cast<int>(table.rows.size()) != n_samples) {
    problems.Add(ErrorCode::kManifestMismatch,
                 path.string() + ": " + std::to_string(table.rows.size()) +
                     " rows, manifest declares n_samples=" + std::to_string(n_samples));
    return std::nullopt;
  }
  if (expected_ids != nullptr) {
    const int id_col = table.Column("sample_id");
    for (int r = 0; r < n_samples; ++r) {
      if (table.rows[r][id_col] != (*expected_ids)[r]) {
        problems.Add(ErrorCode::kManifestMismatch,
                     path.string() + ": data row " + std::to_string(r + 1) + " has sample_id '" +
                         table.rows[r][id_col] + "', labels file has '" + (*expected_ids)[r] + "'");
        return std::nullopt;
      }
    }
  }
  return table;
}

}  // namespace

Manifest Manifest::FromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "manifest: expected a JSON object");
  Manifest m;
  m.name = Field<std::string>(j, "name");
  m.n_samples = Field<int>(j, "n_samples");
  m.classes = Field<std::vector<std::string>>(j, "classes");
  const json sets = Field<json>(j, "feature_sets");
  if (!sets.is_array()) throw Error(ErrorCode::kParse, "manifest: 'feature_sets' must be an array");
  for (const json& s : sets) {
    FeatureSetSpec spec;
    spec.name = Field<std::string>(s, "name");
    spec.dim = Field<int>(s, "dim");
    spec.path = Field<std::string>(s, "path");
    spec.level = OptionalField<std::string>(s, "level").value_or("");
    m.feature_sets.push_back(std::move(spec));
  }
  m.labels_path = Field<std::string>(j, "labels_path");
  m.split_path = Field<std::string>(j, "split_path");
  m.ood_path = OptionalField<std::string>(j, "ood_path");
  m.image_dir = OptionalField<std::string>(j, "image_dir");
  m.saliency_dir = OptionalField<std::string>(j, "saliency_dir");
  m.precomputed_2d_path = OptionalField<std::string>(j, "precomputed_2d_path");
  return m;
}

json Manifest::ToJson() const {
  json sets = json::array();
  for (const auto& s : feature_sets) {
    json entry = {{"name", s.name}, {"dim", s.dim}, {"path", s.path}};
    if (!s.level.empty()) entry["level"] = s.level;
    sets.push_back(entry);
  }
  json j = {{"name", name},
            {"n_samples", n_samples},
            {"classes", classes},
            {"feature_sets", sets},
            {"labels_path", labels_path},
            {"split_path", split_path}};
  if (ood_path) j["ood_path"] = *ood_path;
  if (image_dir) j["image_dir"] = *image_dir;
  if (saliency_dir) j["saliency_dir"] = *saliency_dir;
  if (precomputed_2d_path) j["precomputed_2d_path"] = *precomputed_2d_path;
  return j;
}

const FeatureMatrix& Dataset::Feature(std::string_view name) const {
  for (const FeatureMatrix& f : features) {
    if (f.name == name) return f;
  }
  throw Error(ErrorCode::kNotFound, "no feature set named '" + std::string(name) + "'");
}

std::vector<int> Dataset::Indices(Split which) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (split[i] == which) out.push_back(i);
  }
  return out;
}

std::optional<int> Dataset::IndexOf(std::string_view sample_id) const {
  for (int i = 0; i < size(); ++i) {
    if (sample_ids[i] == sample_id) return i;
  }
  return std::nullopt;
}

bool IsValidSampleId(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

Dataset LoadDataset(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + manifest_path.string());
  json parsed;
  try {
    parsed = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, manifest_path.string() + ": " + e.what());
  }

  Dataset d;
  d.manifest = Manifest::FromJson(parsed);
  d.root = manifest_path.parent_path();
  const Manifest& m = d.manifest;
  const int n = m.n_samples;
  Problems problems;
  if (n < 1) problems.Add(ErrorCode::kManifestMismatch, "manifest: n_samples must be positive");
  if (m.classes.size() < 2) problems.Add(ErrorCode::kManifestMismatch, "manifest: need at least two classes");
  if (m.feature_sets.empty()) problems.Add(ErrorCode::kManifestMismatch, "manifest: no feature sets");
  problems.ThrowIfAny();

  const int classes = static_cast<int>(m.classes.size());
  if (auto table = IdTable(d.Resolve(m.labels_path), "class_index", nullptr, n, problems)) {
    const int id_col = table->Column("sample_id");
    const int class_col = table->Column("class_index");
    std::unordered_map<std::string, int> seen;
    for (int r = 0; r < n; ++r) {
      const std::string& id = table->rows[r][id_col];
      if (!IsValidSampleId(id)) {
        problems.Add(ErrorCode::kParse, table->source.string() + ": data row " + std::to_string(r + 1) +
                                            ": invalid sample_id '" + id + "'");
      } else if (!seen.emplace(id, r).second) {
        problems.Add(ErrorCode::kParse, table->source.string() + ": duplicate sample_id '" + id + "'");
      }
      d.sample_ids.push_back(id);
      try {
        const long long c = csv::ParseInt(table->rows[r][class_col], *table, r, class_col);
        if (c < 0 || c >= classes) {
          problems.Add(ErrorCode::kInvalidInput,
                       table->source.string() + ": data row " + std::to_string(r + 1) +
                           ": class index " + std::to_string(c) + " outside [0, " +
                           std::to_string(classes) + ")");
        }
        d.labels.push_back(static_cast<int>(c));
      } catch (const Error& e) {
        problems.Add(e);
        d.labels.push_back(0);
      }
    }
  }
  const std::vector<std::string>* ids =
      static_cast<int>(d.sample_ids.size()) == n ? &d.sample_ids : nullptr;

  if (auto table = IdTable(d.Resolve(m.split_path), "split", ids, n, problems)) {
    const int col = table->Column("split");
    for (int r = 0; r < n; ++r) {
      const std::string& v = table->rows[r][col];
      if (v != "train" && v != "test") {
        problems.Add(ErrorCode::kParse, table->source.string() + ": data row " + std::to_string(r + 1) +
                                            ": split '" + v + "' is neither train nor test");
      }
      d.split.push_back(v == "train" ? Split::kTrain : Split::kTest);
    }
  }

  if (m.ood_path) {
    if (auto table = IdTable(d.Resolve(*m.ood_path), "is_ood", ids, n, problems)) {
      const int col = table->Column("is_ood");
      for (int r = 0; r < n; ++r) {
        const std::string& v = table->rows[r][col];
        if (v != "0" && v != "1") {
          problems.Add(ErrorCode::kParse, table->source.string() + ": data row " +
                                              std::to_string(r + 1) + ": is_ood must be 0 or 1");
        }
        d.is_ood.push_back(v == "1");
      }
    }
  }

  for (const FeatureSetSpec& spec : m.feature_sets) {
    const fs::path path = d.Resolve(spec.path);
    try {
      const csv::Table table = csv::Read(path);
      if (static_cast<int>(table.header.size()) != spec.dim) {
        problems.Add(ErrorCode::kManifestMismatch,
                     path.string() + ": " + std::to_string(table.header.size()) +
                         " columns, manifest declares dim=" + std::to_string(spec.dim));
        continue;
      }
      for (int c = 0; c < spec.dim; ++c) {
        if (table.header[c] != "f" + std::to_string(c)) {
          problems.Add(ErrorCode::kParse, path.string() + ": header column " + std::to_string(c + 1) +
                                              " should be f" + std::to_string(c));
          break;
        }
      }
      if (static_cast<int>(table.rows.size()) != n) {
        problems.Add(ErrorCode::kManifestMismatch,
                     path.string() + ": " + std::to_string(table.rows.size()) +
                         " rows, manifest declares n_samples=" + std::to_string(n));
        continue;
      }
      std::vector<double> data;
      data.reserve(static_cast<std::size_t>(n) * spec.dim);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < spec.dim; ++c) {
          const double v = csv::ParseDouble(table.rows[r][c], table, r, c);
          if (!std::isfinite(v)) {
            throw Error(ErrorCode::kParse, path.string() + ": data row " + std::to_string(r + 1) +
                                               ": non-finite feature value");
          }
          data.push_back(v);
        }
      }
      d.features.emplace_back(spec.name, n, spec.dim, std::move(data));
    } catch (const Error& e) {
      problems.Add(e);
    }
  }

  for (const auto* dir : {&m.image_dir, &m.saliency_dir}) {
    if (*dir && !fs::is_directory(d.Resolve(**dir))) {
      problems.Add(ErrorCode::kIo, "missing directory " + d.Resolve(**dir).string());
    }
  }
  if (m.precomputed_2d_path && !fs::exists(d.Resolve(*m.precomputed_2d_path))) {
    problems.Add(ErrorCode::kIo, "missing file " + d.Resolve(*m.precomputed_2d_path).string());
  }
  problems.ThrowIfAny();
  return d;
}

std::string FeaturesCsv(const FeatureMatrix& features) {
  std::string out;
  for (int c = 0; c < features.cols; ++c) {
    if (c > 0) out += ',';
    out += 'f' + std::to_string(c);
  }
  out += '\n';
  for (int r = 0; r < features.rows; ++r) {
    for (int c = 0; c < features.cols; ++c) {
      if (c > 0) out += ',';
      out += csv::FormatDouble(features(r, c));
    }
    out += '\n';
  }
  return out;
}

void SaveDataset(const Dataset& d, const fs::path& dir) {
  const Manifest& m = d.manifest;
  csv::WriteText(dir / "manifest.json", m.ToJson().dump(2) + "\n");
  std::string labels = "sample_id,class_index\n", split = "sample_id,split\n", ood = "sample_id,is_ood\n";
  for (int i = 0; i < d.size(); ++i) {
    labels += d.sample_ids[i] + ',' + std::to_string(d.labels[i]) + '\n';
    split += d.sample_ids[i] + (d.split[i] == Split::kTrain ? ",train\n" : ",test\n");
    if (!d.is_ood.empty()) ood += d.sample_ids[i] + (d.is_ood[i] ? ",1\n" : ",0\n");
  }
  csv::WriteText(dir / m.labels_path, labels);
  csv::WriteText(dir / m.split_path, split);
  if (m.ood_path) csv::WriteText(dir / *m.ood_path, ood);
  for (const FeatureSetSpec& spec : m.feature_sets) {
    csv::WriteText(dir / spec.path, FeaturesCsv(d.Feature(spec.name)));
  }
}

ArtifactKind ParseArtifactKind(std::string_view kind) {
  if (kind == "layout") return ArtifactKind::kLayout;
  if (kind == "scores") return ArtifactKind::kScores;
  if (kind == "hierarchy") return ArtifactKind::kHierarchy;
  throw Error(ErrorCode::kInvalidKind,
              "unknown artifact kind '" + std::string(kind) + "' (layout, scores, hierarchy)");
}

std::string_view ArtifactFileName(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::kLayout: return "layout.json";
    case ArtifactKind::kScores: return "scores.csv";
    case ArtifactKind::kHierarchy: return "hierarchy.json";
  }
  return "artifact";
}

fs::path Persist(ArtifactKind kind, const std::string& content, const fs::path& results_root,
                 const std::string& dataset, const std::string& run_id) {
  if (!IsValidSampleId(dataset) || !IsValidSampleId(run_id)) {
    throw Error(ErrorCode::kInvalidInput, "dataset and run ids must be plain file names");
  }
  const fs::path path = results_root / dataset / run_id / ArtifactFileName(kind);
  csv::WriteText(path, content);
  return path;
}

std::vector<ScoreRow> LoadScoresCsv(const fs::path& path) {
  const csv::Table t = csv::Read(path);
  const int id = t.Column("sample_id"), score = t.Column("ood_score"),
            norm = t.Column("ood_score_normalized"), conf = t.Column("confidence"),
            pred = t.Column("predicted_class"), type = t.Column("sample_type");
  std::vector<ScoreRow> rows;
  for (int r = 0; r < static_cast<int>(t.rows.size()); ++r) {
    const auto& cells = t.rows[r];
    rows.push_back({cells[id], csv::ParseDouble(cells[score], t, r, score),
                    csv::ParseDouble(cells[norm], t, r, norm), csv::ParseDouble(cells[conf], t, r, conf),
                    static_cast<int>(csv::ParseInt(cells[pred], t, r, pred)), cells[type]});
  }
  return rows;
}

std::vector<std::pair<std::string, bool>> LoadOodTruth(const std::filesystem::path& path) {
  const csv::Table table = csv::Read(path);
  const int id_col = table.Column("sample_id");
  const int flag_col = table.Column("is_ood");
  std::vector<std::pair<std::string, bool>> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& id = table.rows[r][id_col];
    const std::string& flag = table.rows[r][flag_col];
    const std::string where = path.string() + " data row " + std::to_string(r + 1);
    if (flag != "0" && flag != "1") throw Error(ErrorCode::kParse, where + ": is_ood must be 0 or 1");
    if (!seen.insert(id).second) throw Error(ErrorCode::kParse, where + ": repeated sample id " + id);
    out.emplace_back(id, flag == "1");
  }
  return out;
}

}  // namespace oodx::data
