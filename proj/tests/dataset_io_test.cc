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

#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "oodx/error.h"
#include "oodx/synthetic.h"

namespace oodx::data {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oodx_dataset_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void Write(const std::string& name, const std::string& text) {
    fs::create_directories((dir_ / name).parent_path());
    std::ofstream(dir_ / name) << text;
  }

  // Four samples, one 2-d feature set.
  void WriteMinimal() {
    Write("manifest.json", R"({"name": "mini", "n_samples": 4, "classes": ["a", "b"],
      "feature_sets": [{"name": "g", "dim": 2, "path": "g.csv"}],
      "labels_path": "labels.csv", "split_path": "split.csv"})");
    Write("g.csv", "f0,f1\n1,2\n3,4\n5,6\n7,8\n");
    Write("labels.csv", "sample_id,class_index\ns0,0\ns1,1\ns2,0\ns3,1\n");
    Write("split.csv", "sample_id,split\ns0,train\ns1,train\ns2,test\ns3,test\n");
  }

  ErrorCode LoadError() {
    try {
      LoadDataset(dir_ / "manifest.json");
    } catch (const Error& e) {
      message_ = e.what();
      return e.code();
    }
    ADD_FAILURE() << "dataset loaded";
    return ErrorCode::kInternal;
  }

  fs::path dir_;
  std::string message_;
};

TEST_F(TempDir, MinimalLoads) {
  WriteMinimal();
  const Dataset d = LoadDataset(dir_ / "manifest.json");
  EXPECT_EQ(d.size(), 4);
  ASSERT_EQ(d.features.size(), 1u);
  EXPECT_EQ(d.features[0].rows, 4);
  EXPECT_EQ(d.features[0].cols, 2);
  EXPECT_EQ(d.features[0](3, 1), 8.0);
  EXPECT_EQ(d.labels, (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(d.Indices(Split::kTest), (std::vector<int>{2, 3}));
  EXPECT_TRUE(d.is_ood.empty());
  EXPECT_EQ(d.IndexOf("s2"), 2);
}

TEST_F(TempDir, LabelRowCountNamesFile) {
  WriteMinimal();
  Write("labels.csv", "sample_id,class_index\ns0,0\ns1,1\ns2,0\ns3,1\ns4,0\n");
  EXPECT_EQ(LoadError(), ErrorCode::kManifestMismatch);
  EXPECT_NE(message_.find("labels.csv"), std::string::npos);
}

TEST_F(TempDir, ProblemsAreAggregated) {
  WriteMinimal();
  Write("labels.csv", "sample_id,class_index\ns0,0\ns1,7\ns2,0\ns3,1\n");
  Write("g.csv", "f0,f1\n1,2\n3,4\n5,6\n");
  fs::remove(dir_ / "split.csv");
  LoadError();
  EXPECT_NE(message_.find("3 problem(s)"), std::string::npos) << message_;
  EXPECT_NE(message_.find("class index 7"), std::string::npos);
  EXPECT_NE(message_.find("split.csv"), std::string::npos);
  EXPECT_NE(message_.find("g.csv"), std::string::npos);
}

TEST_F(TempDir, SplitIdsMustFollowLabels) {
  WriteMinimal();
  Write("split.csv", "sample_id,split\ns0,train\ns2,train\ns1,test\ns3,test\n");
  EXPECT_EQ(LoadError(), ErrorCode::kManifestMismatch);
  EXPECT_NE(message_.find("data row 2"), std::string::npos);
}

TEST_F(TempDir, BadValues) {
  WriteMinimal();
  Write("g.csv", "f0,f1\n1,2\n3,x\n5,6\n7,8\n");
  EXPECT_EQ(LoadError(), ErrorCode::kParse);
  WriteMinimal();
  Write("g.csv", "f0,f1,f2\n1,2,3\n3,4,5\n5,6,7\n7,8,9\n");
  EXPECT_EQ(LoadError(), ErrorCode::kManifestMismatch);
  WriteMinimal();
  Write("split.csv", "sample_id,split\ns0,train\ns1,valid\ns2,test\ns3,test\n");
  EXPECT_EQ(LoadError(), ErrorCode::kParse);
  WriteMinimal();
  Write("labels.csv", "sample_id,class_index\n../s0,0\ns1,1\ns2,0\ns3,1\n");
  EXPECT_EQ(LoadError(), ErrorCode::kParse);
  WriteMinimal();
  Write("manifest.json", R"({"name": "mini"})");
  EXPECT_EQ(LoadError(), ErrorCode::kParse);
}

TEST_F(TempDir, TenFeatureSets) {
  synthetic::ColorBiasOptions o;
  o.n_train = 20;
  o.n_test = 10;
  o.feature_sets = 10;
  const Dataset d = synthetic::MakeColorBiasDataset(o);
  SaveDataset(d, dir_);
  const Dataset back = LoadDataset(dir_ / "manifest.json");
  ASSERT_EQ(back.features.size(), 10u);
  int high = 0;
  for (const auto& spec : back.manifest.feature_sets) high += spec.level == "high";
  EXPECT_EQ(high, 5);
  EXPECT_EQ(back.manifest, d.manifest);
  EXPECT_EQ(back.sample_ids, d.sample_ids);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.split, d.split);
  EXPECT_EQ(back.is_ood, d.is_ood);
  for (std::size_t f = 0; f < d.features.size(); ++f) {
    EXPECT_EQ(back.features[f].name, d.features[f].name);
    EXPECT_EQ(back.features[f].data, d.features[f].data);
  }
}

TEST_F(TempDir, PersistRoundTripsScores) {
  const std::string csv =
      "sample_id,ood_score,ood_score_normalized,confidence,predicted_class,sample_type\n"
      "a,0.125,0.18033688011112042,0.9,1,reliable\nb,0.6931471805599453,1,0.5,0,known_unknown\n";
  const fs::path path = Persist(ParseArtifactKind("scores"), csv, dir_ / "results", "ds", "run1");
  EXPECT_EQ(path, dir_ / "results" / "ds" / "run1" / "scores.csv");
  const auto rows = LoadScoresCsv(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], (ScoreRow{"b", 0.6931471805599453, 1.0, 0.5, 0, "known_unknown"}));
  // Overwrite is idempotent; a second run id is kept alongside.
  Persist(ArtifactKind::kScores, csv, dir_ / "results", "ds", "run1");
  Persist(ArtifactKind::kLayout, "{}", dir_ / "results", "ds", "run2");
  EXPECT_TRUE(fs::exists(dir_ / "results" / "ds" / "run1" / "scores.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "results" / "ds" / "run2" / "layout.json"));
}

TEST(ArtifactKind, UnknownKind) {
  try {
    ParseArtifactKind("video");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidKind);
  }
}

TEST(SampleId, Validation) {
  EXPECT_TRUE(IsValidSampleId("img_001.v2"));
  EXPECT_FALSE(IsValidSampleId(""));
  EXPECT_FALSE(IsValidSampleId(".hidden"));
  EXPECT_FALSE(IsValidSampleId("a/b"));
  EXPECT_FALSE(IsValidSampleId("a,b"));
}

}  // namespace
}  // namespace oodx::data
