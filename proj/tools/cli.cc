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


#include "cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oodx/bench.h"
#include "oodx/csv.h"
#include "oodx/dataset_io.h"
#include "oodx/detect.h"
#include "oodx/error.h"
#include "oodx/grid_layout.h"
#include "oodx/metrics.h"
#include "oodx/ood_ensemble.h"
#include "oodx/projection.h"
#include "oodx/server.h"
#include "oodx/synthetic.h"

namespace oodx::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

void WriteJson(const fs::path& path, const json& value) { csv::WriteText(path, value.dump(2) + "\n"); }

// Replaces the ground truth of `dataset` with a truth CSV's flags.
void ApplyTruth(data::Dataset& dataset, const fs::path& path) {
  const auto truth = data::LoadOodTruth(path);
  std::vector<bool> flags(dataset.size(), false);
  std::vector<bool> seen(dataset.size(), false);
  for (const auto& [id, flag] : truth) {
    const auto row = dataset.IndexOf(id);
    if (!row) throw Error(ErrorCode::kManifestMismatch, path.string() + ": unknown sample id " + id);
    flags[*row] = flag;
    seen[*row] = true;
  }
  for (int r : dataset.Indices(data::Split::kTest)) {
    if (!seen[r]) {
      throw Error(ErrorCode::kManifestMismatch,
                  path.string() + ": no flag for test sample " + dataset.sample_ids[r]);
    }
  }
  dataset.is_ood = flags;
}

struct DetectArgs {
  std::string manifest;
  int n_models = 3;
  std::string feature_sets;
  std::string prediction_feature_set;
  std::string truth;
  std::string out;
};

int RunDetect(const DetectArgs& a, std::ostream& out) {
  data::Dataset d = data::LoadDataset(a.manifest);
  if (!a.truth.empty()) ApplyTruth(d, a.truth);
  detect::DetectOptions options;
  options.n_models = a.n_models;
  options.feature_sets = SplitCommas(a.feature_sets);
  options.prediction_feature_set = a.prediction_feature_set;
  const detect::DetectResult result = detect::Detect(d, options);
  const fs::path dir = a.out;
  csv::WriteText(dir / "scores.csv", ood::ScoresCsv(result.scores, detect::TestSampleIds(d, result)));
  out << "wrote " << (dir / "scores.csv").string() << " (" << result.scores.samples.size()
      << " test samples, " << result.classifiers.size() << " classifiers)\n";
  if (!d.is_ood.empty()) {
    const std::string method = result.classifiers.size() > 1 ? "M-OoD" : "S-OoD";
    const json report = metrics::ReportJson(d.manifest.name, {{method, detect::Evaluate(d, result)}});
    WriteJson(dir / "eval.json", report);
    out << "wrote " << (dir / "eval.json").string() << " auroc "
        << report["methods"][0]["auroc"].get<double>() << "\n";
  }
  return 0;
}

struct LayoutArgs {
  std::string manifest;
  std::string split = "test";
  std::string categories;
  int k = 100;
  bool baseline = false;
  std::uint64_t seed = 0;
  int tsne_iterations = 1000;
  std::string out;
};

int RunLayout(const LayoutArgs& a, std::ostream& out, std::ostream& err) {
  const data::Dataset d = data::LoadDataset(a.manifest);
  std::vector<int> wanted;
  for (const std::string& name : SplitCommas(a.categories)) {
    auto it = std::find(d.manifest.classes.begin(), d.manifest.classes.end(), name);
    if (it == d.manifest.classes.end()) throw Error(ErrorCode::kInvalidInput, "unknown category " + name);
    wanted.push_back(static_cast<int>(it - d.manifest.classes.begin()));
  }
  std::vector<int> rows;
  for (int r = 0; r < d.size(); ++r) {
    const bool split_ok = a.split == "both" || (a.split == "train") == (d.split[r] == data::Split::kTrain);
    const bool category_ok = wanted.empty() || std::count(wanted.begin(), wanted.end(), d.labels[r]) > 0;
    if (split_ok && category_ok) rows.push_back(r);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptySelection, "no samples match the split and categories");

  // The whole dataset is projected once; filters only pick rows from it.
  projection::ProjectedPoints all;
  if (d.manifest.precomputed_2d_path) {
    all = projection::LoadPrecomputed(d.Resolve(*d.manifest.precomputed_2d_path), d.size());
  } else {
    projection::TsneOptions options;
    options.seed = a.seed;
    options.iterations = a.tsne_iterations;
    options.perplexity = std::min(30.0, (d.size() - 1) / 3.0);
    all = projection::Tsne(d.features.front(), options);
  }
  std::vector<Point2> points;
  for (int r : rows) points.push_back(all.coords[r]);

  const grid::GridAssignment layout = grid::Layout(points, {.k = a.k, .with_baseline = a.baseline});
  for (const std::string& w : layout.warnings) err << "oodx: warning: " << w << "\n";
  json doc = grid::LayoutToJson(layout, {}, false);
  for (json& cell : doc["cells"]) {
    if (!cell["sample_id"].is_null()) cell["sample_id"] = d.sample_ids[rows[cell["sample_id"].get<int>()]];
  }
  doc["split"] = a.split;
  doc["projection"] = projection::MetadataJson(all, d.features.front().name);

  json report{{"c_k", layout.report.c_k},
              {"k_requested", a.k},
              {"k", layout.k_used},
              {"n", static_cast<int>(rows.size())},
              {"t_knn_seconds", layout.report.t_seconds}};
  if (layout.report.c_opt) report["c_opt"] = *layout.report.c_opt;
  if (layout.report.cr) report["cr"] = std::isfinite(*layout.report.cr) ? json(*layout.report.cr) : json("inf");
  if (layout.report.t_baseline_seconds) report["t_baseline_seconds"] = *layout.report.t_baseline_seconds;
  report["warnings"] = layout.warnings;

  const fs::path dir = a.out;
  WriteJson(dir / "layout.json", doc);
  WriteJson(dir / "report.json", report);
  out << "wrote " << (dir / "layout.json").string() << " (" << layout.grid.m << "x" << layout.grid.n
      << ", k=" << layout.k_used << ")\n";
  return 0;
}

struct BenchArgs {
  int n = 2025;
  std::string ks = "50,100";
  int trials = 10;
  std::uint64_t seed = 0;
  int clusters = 10;
  std::string out;
};

int RunBench(const BenchArgs& a, std::ostream& out) {
  bench::LapBenchOptions options;
  options.n = a.n;
  options.trials = a.trials;
  options.seed = a.seed;
  options.clusters = a.clusters;
  options.ks.clear();
  for (const std::string& k : SplitCommas(a.ks)) {
    try {
      std::size_t used = 0;
      options.ks.push_back(std::stoi(k, &used));
      if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidK, "--k expects a comma-separated list of integers, got " + a.ks);
    }
  }
  const std::string table = bench::LapCsv(bench::RunLapBench(options));
  if (a.out.empty()) {
    out << table;
  } else {
    csv::WriteText(a.out, table);
  }
  return 0;
}

int RunEval(const std::string& scores_path, const std::string& truth_path, const std::string& out_path,
            std::ostream& out) {
  const auto scores = data::LoadScoresCsv(scores_path);
  const auto truth = data::LoadOodTruth(truth_path);
  std::map<std::string, bool> flag_of(truth.begin(), truth.end());
  std::vector<double> values;
  std::vector<bool> flags;
  for (const data::ScoreRow& row : scores) {
    auto it = flag_of.find(row.sample_id);
    if (it == flag_of.end()) {
      throw Error(ErrorCode::kManifestMismatch, truth_path + ": no flag for sample " + row.sample_id);
    }
    values.push_back(row.ood_score);
    flags.push_back(it->second);
  }
  const json result = metrics::ResultJson(metrics::Evaluate(values, flags));
  if (!out_path.empty()) WriteJson(out_path, result);
  out << result.dump(2) << "\n";
  return 0;
}

struct SyntheticArgs {
  std::string kind = "color-bias";
  std::string out;
  std::uint64_t seed = 0;
  int n_train = 1000;
  int n_test = 1000;
  int feature_sets = 6;
  int dim = 8;
  int n = 2025;
  int clusters = 10;
};

int RunSynthetic(const SyntheticArgs& a, std::ostream& out) {
  const fs::path dir = a.out;
  if (a.kind == "color-bias") {
    synthetic::ColorBiasOptions o;
    o.n_train = a.n_train;
    o.n_test = a.n_test;
    o.feature_sets = a.feature_sets;
    o.dim = a.dim;
    o.seed = a.seed;
    data::SaveDataset(synthetic::MakeColorBiasDataset(o), dir);
  } else {
    const synthetic::LabelledLayout layout = synthetic::MakeClustersDataset(a.n, a.clusters, a.seed);
    data::SaveDataset(layout.dataset, dir);
    projection::SavePrecomputed(dir / *layout.dataset.manifest.precomputed_2d_path, layout.coords);
  }
  out << "wrote " << (dir / "manifest.json").string() << "\n";
  return 0;
}

int RunServe(const std::string& data_dir, const std::string& host, int port, const std::string& origin,
             std::ostream& out) {
  server::ServerConfig config;
  config.data_dir = data_dir;
  config.cors_origin = origin;
  server::Api api(config);
  server::HttpServer http(api);
  const int bound = http.Bind(host, port);
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  out << "serving " << data_dir << " on http://" << host << ":" << bound << std::endl;
  return http.Listen() ? 0 : 1;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Out-of-distribution analysis: ensemble detection, grid layout and zooming."};
  app.name("oodx");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  DetectArgs detect;
  auto* cmd_detect = app.add_subcommand("detect", "Train the classifier family and score the test split");
  cmd_detect->add_option("manifest", detect.manifest, "Dataset manifest.json")->required()->check(CLI::ExistingFile);
  cmd_detect->add_option("--n-models", detect.n_models, "Regularization coefficients per feature set")
      ->check(CLI::Range(1, 11));
  cmd_detect->add_option("--feature-sets", detect.feature_sets, "Comma-separated subset (default: all)");
  cmd_detect->add_option("--prediction-feature-set", detect.prediction_feature_set,
                         "Feature set supplying confidence and predicted class");
  cmd_detect->add_option("--truth", detect.truth, "CSV sample_id,is_ood overriding the manifest's")
      ->check(CLI::ExistingFile);
  cmd_detect->add_option("--out", detect.out, "Output directory")->required();

  LayoutArgs layout;
  auto* cmd_layout = app.add_subcommand("layout", "Assign projected samples to a square grid");
  cmd_layout->add_option("manifest", layout.manifest, "Dataset manifest.json")->required()->check(CLI::ExistingFile);
  cmd_layout->add_option("--split", layout.split, "train, test or both")
      ->check(CLI::IsMember({"train", "test", "both"}));
  cmd_layout->add_option("--categories", layout.categories, "Comma-separated class names");
  cmd_layout->add_option("--k", layout.k, "Nearest grid cells per sample")->check(CLI::PositiveNumber);
  cmd_layout->add_flag("--baseline", layout.baseline, "Also solve the dense problem and report Cr");
  cmd_layout->add_option("--seed", layout.seed, "Projection seed");
  cmd_layout->add_option("--tsne-iterations", layout.tsne_iterations, "t-SNE iterations")
      ->check(CLI::PositiveNumber);
  cmd_layout->add_option("--out", layout.out, "Output directory")->required();

  BenchArgs bench_args;
  auto* cmd_bench = app.add_subcommand("bench-lap", "Compare kNN matching with the dense optimum");
  cmd_bench->add_option("--n", bench_args.n, "Samples per trial")->check(CLI::PositiveNumber);
  cmd_bench->add_option("--k", bench_args.ks, "Comma-separated k values");
  cmd_bench->add_option("--trials", bench_args.trials, "Trials")->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", bench_args.seed, "Seed of the first trial");
  cmd_bench->add_option("--clusters", bench_args.clusters, "Clusters per layout")->check(CLI::PositiveNumber);
  cmd_bench->add_option("--out", bench_args.out, "CSV file (default: stdout)");

  std::string scores_path, truth_path, eval_out;
  auto* cmd_eval = app.add_subcommand("eval-ood", "AUROC, AUPR and Prec@K of a scores file");
  cmd_eval->add_option("scores", scores_path, "scores.csv")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("truth", truth_path, "CSV sample_id,is_ood")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--out", eval_out, "Also write the JSON here");

  std::string data_dir, host = "127.0.0.1", origin = "*";
  int port = 8780;
  auto* cmd_serve = app.add_subcommand("serve", "Serve the HTTP API");
  cmd_serve->add_option("--data-dir", data_dir, "Directory of datasets")->required()->check(CLI::ExistingDirectory);
  cmd_serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  cmd_serve->add_option("--host", host, "Address to bind");
  cmd_serve->add_option("--cors-origin", origin, "Allowed browser origin");

  SyntheticArgs synth;
  auto* cmd_synth = app.add_subcommand("gen-synthetic", "Write a synthetic dataset");
  cmd_synth->add_option("--kind", synth.kind, "color-bias or clusters")
      ->check(CLI::IsMember({"color-bias", "clusters"}));
  cmd_synth->add_option("--out", synth.out, "Output directory")->required();
  cmd_synth->add_option("--seed", synth.seed, "Seed");
  cmd_synth->add_option("--n-train", synth.n_train, "color-bias: training samples")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--n-test", synth.n_test, "color-bias: test samples")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--feature-sets", synth.feature_sets, "color-bias: feature sets")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--dim", synth.dim, "color-bias: dimensions per set")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--n", synth.n, "clusters: samples")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--clusters", synth.clusters, "clusters: cluster count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), '\n', ' ');
    err << "oodx: error: " << what << "\n";
    return 2;
  }

  try {
    if (cmd_detect->parsed()) return RunDetect(detect, out);
    if (cmd_layout->parsed()) return RunLayout(layout, out, err);
    if (cmd_bench->parsed()) return RunBench(bench_args, out);
    if (cmd_eval->parsed()) return RunEval(scores_path, truth_path, eval_out, out);
    if (cmd_serve->parsed()) return RunServe(data_dir, host, port, origin, out);
    if (cmd_synth->parsed()) return RunSynthetic(synth, out);
  } catch (const Error& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), '\n', ' ');
    err << "oodx: error: " << what << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "oodx: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace oodx::cli
