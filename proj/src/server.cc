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


#include "oodx/server.h"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "oodx/dataset_io.h"
#include "oodx/detect.h"
#include "oodx/error.h"
#include "oodx/metrics.h"
#include "oodx/ood_ensemble.h"
#include "oodx/projection.h"
#include "oodx/sampling.h"

namespace oodx::server {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// A request body problem tied to one field.
class FieldError : public Error {
 public:
  FieldError(std::string field, const std::string& message)
      : Error(ErrorCode::kInvalidInput, field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kDegenerateLabels:
    case ErrorCode::kUndefinedMetric:
      return 422;
    case ErrorCode::kIo:
    case ErrorCode::kParse:
    case ErrorCode::kManifestMismatch:
    case ErrorCode::kInfeasibleGraph:
    case ErrorCode::kSizeLimit:
    case ErrorCode::kInternal:
      return 500;
    default:
      return 400;
  }
}

json ErrorBody(std::string_view code, const std::string& message, const std::string& field = "") {
  json error{{"code", code}, {"message", message}};
  if (!field.empty()) error["field"] = field;
  return {{"error", error}};
}

Response JsonResponse(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = body.dump();
  return r;
}

// ---- body parsing ----

json ParseBody(const std::string& body) {
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw FieldError("body", "not valid JSON");
  if (!parsed.is_object()) throw FieldError("body", "must be a JSON object");
  return parsed;
}

long long GetInt(const json& body, const std::string& field, long long fallback, long long lo,
                 long long hi) {
  if (!body.contains(field)) return fallback;
  const json& v = body[field];
  if (!v.is_number_integer()) throw FieldError(field, "must be an integer");
  const long long x = v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)
                          ? hi + 1
                          : v.get<long long>();
  if (x < lo || x > hi) {
    throw FieldError(field, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x;
}

double GetNumber(const json& body, const std::string& field, double fallback) {
  if (!body.contains(field)) return fallback;
  if (!body[field].is_number()) throw FieldError(field, "must be a number");
  return body[field].get<double>();
}

bool GetBool(const json& body, const std::string& field, bool fallback) {
  if (!body.contains(field)) return fallback;
  if (!body[field].is_boolean()) throw FieldError(field, "must be true or false");
  return body[field].get<bool>();
}

std::string GetString(const json& body, const std::string& field, const std::string& fallback,
                      const std::vector<std::string>& allowed = {}) {
  if (!body.contains(field)) return fallback;
  if (!body[field].is_string()) throw FieldError(field, "must be a string");
  std::string s = body[field].get<std::string>();
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw FieldError(field, "must be one of " + list);
  }
  return s;
}

std::optional<std::vector<std::string>> GetStrings(const json& body, const std::string& field) {
  if (!body.contains(field) || body[field].is_null()) return std::nullopt;
  const json& v = body[field];
  if (!v.is_array()) throw FieldError(field, "must be an array of strings");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) throw FieldError(field, "must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

bool QueryFlag(const Request& request, const std::string& name) {
  auto it = request.query.find(name);
  return it != request.query.end() && (it->second == "1" || it->second == "true");
}

std::vector<std::string> SplitCommas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

// Stable 64-bit FNV-1a, used for content-derived ids.
std::string HashId(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- per-session worker ----

class SerialExecutor {
 public:
  SerialExecutor() : worker_([this] { Run(); }) {}
  ~SerialExecutor() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    worker_.join();
  }

  void Post(std::function<void()> task) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(task));
    }
    cv_.notify_one();
  }

 private:
  // Drains the queue before honouring stop.
  void Run() {
    for (;;) {
      std::function<void()> task;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stop_ || !queue_.empty(); });
        if (queue_.empty()) return;
        task = std::move(queue_.front());
        queue_.pop_front();
      }
      task();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> queue_;
  bool stop_ = false;
  std::thread worker_;
};

struct Job {
  std::string id;
  std::string kind;
  std::string session_id;

  std::mutex mu;
  std::condition_variable cv;
  std::string status = "queued";
  json result;
  int error_status = 0;
  json error;

  void Start() {
    std::lock_guard lock(mu);
    status = "running";
  }
  void Finish(json value) {
    {
      std::lock_guard lock(mu);
      status = "succeeded";
      result = std::move(value);
    }
    cv.notify_all();
  }
  void Fail(int http_status, json body) {
    {
      std::lock_guard lock(mu);
      status = "failed";
      error_status = http_status;
      error = std::move(body);
    }
    cv.notify_all();
  }
  void Wait() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return status == "succeeded" || status == "failed"; });
  }
  json ToJson() {
    std::lock_guard lock(mu);
    json out{{"job_id", id}, {"kind", kind}, {"session_id", session_id}, {"status", status}};
    if (status == "succeeded") out["result"] = result;
    if (status == "failed") out["error"] = error["error"];
    return out;
  }
};

struct DetectState {
  detect::DetectResult result;  // every dataset row, in order
  json summary;
};

struct LayoutState {
  std::string id;
  json request;
  std::shared_ptr<const DetectState> detect;  // scores the hierarchy was sampled with
  json projection;
  std::vector<std::string> warnings;
  std::mutex mu;  // guards hierarchy
  std::unique_ptr<sampling::Hierarchy> hierarchy;
};

struct Session {
  std::string id;
  std::string dataset_name;
  std::shared_ptr<const data::Dataset> dataset;

  std::mutex mu;  // guards the pointers below, not what they point to
  std::shared_ptr<const DetectState> detect;
  std::map<std::string, std::shared_ptr<LayoutState>> layouts;

  // Worker-only.
  std::map<std::uint64_t, std::shared_ptr<const projection::ProjectedPoints>> projections;

  // Last, so queued work finishes before the fields above go away.
  SerialExecutor worker;

  std::shared_ptr<const DetectState> Detected() {
    std::lock_guard lock(mu);
    return detect;
  }
  std::shared_ptr<LayoutState> FindLayout(const std::string& layout_id) {
    std::lock_guard lock(mu);
    auto it = layouts.find(layout_id);
    if (it == layouts.end()) throw Error(ErrorCode::kNotFound, "no layout " + layout_id);
    return it->second;
  }
};

struct DatasetEntry {
  data::Manifest manifest;
  fs::path manifest_path;
  std::shared_ptr<const data::Dataset> loaded;
};

std::string SplitName(data::Split s) { return s == data::Split::kTrain ? "train" : "test"; }

std::vector<int> ParseCategories(const data::Dataset& d, const std::vector<std::string>& names,
                                 const std::string& field) {
  std::vector<int> out;
  for (const std::string& name : names) {
    auto it = std::find(d.manifest.classes.begin(), d.manifest.classes.end(), name);
    if (it == d.manifest.classes.end()) throw FieldError(field, "unknown category '" + name + "'");
    out.push_back(static_cast<int>(it - d.manifest.classes.begin()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Rows in the split ("train", "test" or "both") whose label is among
// `categories` (all when empty).
std::vector<int> SelectRows(const data::Dataset& d, const std::string& split,
                            const std::vector<int>& categories) {
  std::vector<int> rows;
  for (int r = 0; r < d.size(); ++r) {
    if (split != "both" && SplitName(d.split[r]) != split) continue;
    if (!categories.empty() &&
        !std::binary_search(categories.begin(), categories.end(), d.labels[r])) {
      continue;
    }
    rows.push_back(r);
  }
  return rows;
}

json ThresholdsJson(const ood::Thresholds& t) {
  return {{"ood_hi", t.ood_hi}, {"conf_hi", t.conf_hi}, {"conf_reliable", t.conf_reliable}};
}

}  // namespace

struct Api::Impl {
  explicit Impl(ServerConfig c) : config(std::move(c)) {
    if (config.results_dir.empty()) config.results_dir = config.data_dir / "results";
    ScanDatasets();
  }

  Response Handle(const Request& request);

  // ---- datasets ----

  void ScanDatasets() {
    std::vector<fs::path> candidates{config.data_dir / "manifest.json"};
    std::error_code ec;
    if (fs::is_directory(config.data_dir, ec)) {
      for (const auto& entry : fs::directory_iterator(config.data_dir, ec)) {
        if (entry.is_directory()) candidates.push_back(entry.path() / "manifest.json");
      }
    }
    std::sort(candidates.begin() + 1, candidates.end());
    for (const fs::path& path : candidates) {
      if (!fs::is_regular_file(path, ec)) continue;
      try {
        std::ifstream in(path);
        data::Manifest m = data::Manifest::FromJson(json::parse(in));
        if (!datasets.contains(m.name)) datasets[m.name] = DatasetEntry{m, path, nullptr};
      } catch (const std::exception&) {
        // An unreadable manifest only hides that dataset.
      }
    }
  }

  std::shared_ptr<const data::Dataset> LoadDataset(const std::string& name) {
    std::lock_guard lock(datasets_mu);
    auto it = datasets.find(name);
    if (it == datasets.end()) throw Error(ErrorCode::kNotFound, "no dataset " + name);
    if (!it->second.loaded) {
      it->second.loaded = std::make_shared<const data::Dataset>(data::LoadDataset(it->second.manifest_path));
    }
    return it->second.loaded;
  }

  Response ListDatasets() {
    json list = json::array();
    for (const auto& [name, entry] : datasets) {
      const data::Manifest& m = entry.manifest;
      json sets = json::array();
      for (const auto& f : m.feature_sets) {
        sets.push_back({{"name", f.name}, {"dim", f.dim}, {"level", f.level}});
      }
      list.push_back({{"name", name},
                      {"n_samples", m.n_samples},
                      {"classes", m.classes},
                      {"feature_sets", sets},
                      {"has_ood_truth", m.ood_path.has_value()},
                      {"has_images", m.image_dir.has_value()},
                      {"has_saliency", m.saliency_dir.has_value()},
                      {"has_projection", m.precomputed_2d_path.has_value()}});
    }
    return JsonResponse(200, {{"datasets", list}});
  }

  Response SampleFile(const std::string& dataset_name, const std::string& sample_id,
                      const std::string& kind) {
    const auto d = LoadDataset(dataset_name);
    if (!data::IsValidSampleId(sample_id) || !d->IndexOf(sample_id)) {
      throw Error(ErrorCode::kNotFound, "no sample " + sample_id + " in " + dataset_name);
    }
    const auto& dir = kind == "image" ? d->manifest.image_dir : d->manifest.saliency_dir;
    if (!dir) throw Error(ErrorCode::kNotFound, dataset_name + " has no " + kind + " directory");
    const fs::path path = d->Resolve(*dir) / (sample_id + ".png");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kNotFound, "no " + kind + " for " + sample_id);
    Response r;
    r.content_type = "image/png";
    r.body.assign(std::istreambuf_iterator<char>(in), {});
    return r;
  }

  // ---- sessions and jobs ----

  std::shared_ptr<Session> FindSession(const std::string& id) {
    std::lock_guard lock(sessions_mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw Error(ErrorCode::kNotFound, "no session " + id);
    return it->second;
  }

  Response CreateSession(const Request& request) {
    const json body = ParseBody(request.body);
    if (!body.contains("dataset")) throw FieldError("dataset", "required");
    const std::string name = GetString(body, "dataset", "");
    auto session = std::make_shared<Session>();
    session->dataset_name = name;
    session->dataset = LoadDataset(name);
    {
      std::lock_guard lock(sessions_mu);
      session->id = "s" + std::to_string(++session_counter);
      sessions[session->id] = session;
    }
    return JsonResponse(201, {{"session_id", session->id},
                              {"dataset", name},
                              {"n_samples", session->dataset->size()}});
  }

  Response SessionInfo(const std::string& id) {
    auto s = FindSession(id);
    json layouts = json::array();
    std::lock_guard lock(s->mu);
    for (const auto& [layout_id, layout] : s->layouts) layouts.push_back(layout_id);
    return JsonResponse(200, {{"session_id", s->id},
                              {"dataset", s->dataset_name},
                              {"detected", s->detect != nullptr},
                              {"layouts", layouts}});
  }

  // Queues `work` on the session's worker. Without `wait` the reply is 202
  // with the job; otherwise it is the job's outcome.
  Response Submit(Session& session, const std::string& kind, bool wait, std::function<json()> work) {
    auto job = std::make_shared<Job>();
    job->kind = kind;
    job->session_id = session.id;
    {
      std::lock_guard lock(jobs_mu);
      job->id = "job" + std::to_string(++job_counter);
      jobs[job->id] = job;
    }
    session.worker.Post([job, work = std::move(work)] {
      job->Start();
      try {
        job->Finish(work());
      } catch (const FieldError& e) {
        job->Fail(400, ErrorBody(ErrorCodeName(e.code()), e.what(), e.field()));
      } catch (const Error& e) {
        job->Fail(StatusFor(e.code()), ErrorBody(ErrorCodeName(e.code()), e.what()));
      } catch (const std::exception& e) {
        job->Fail(500, ErrorBody("internal", e.what()));
      }
    });
    if (!wait) {
      Response r = JsonResponse(202, job->ToJson());
      r.headers.emplace_back("Location", "/api/jobs/" + job->id);
      return r;
    }
    job->Wait();
    if (job->status == "failed") return JsonResponse(job->error_status, job->error);
    return JsonResponse(200, job->result);
  }

  Response JobStatus(const std::string& id, const Request& request) {
    std::shared_ptr<Job> job;
    {
      std::lock_guard lock(jobs_mu);
      auto it = jobs.find(id);
      if (it == jobs.end()) throw Error(ErrorCode::kNotFound, "no job " + id);
      job = it->second;
    }
    if (QueryFlag(request, "wait")) job->Wait();
    return JsonResponse(200, job->ToJson());
  }

  // ---- detection ----

  Response Detect(const std::string& id, const Request& request) {
    auto s = FindSession(id);
    const data::Dataset& d = *s->dataset;
    const json body = ParseBody(request.body);
    detect::DetectOptions options;
    options.n_models = static_cast<int>(GetInt(body, "n_models", 3, 1, 11));
    if (auto sets = GetStrings(body, "feature_sets")) {
      if (sets->empty()) throw FieldError("feature_sets", "must not be empty");
      for (const auto& name : *sets) {
        if (std::none_of(d.features.begin(), d.features.end(),
                         [&](const FeatureMatrix& f) { return f.name == name; })) {
          throw FieldError("feature_sets", "unknown feature set '" + name + "'");
        }
      }
      options.feature_sets = *sets;
    }
    options.prediction_feature_set = GetString(body, "prediction_feature_set", "");
    if (!options.prediction_feature_set.empty()) {
      const auto& used = options.feature_sets;
      const bool known = used.empty()
                             ? std::any_of(d.features.begin(), d.features.end(),
                                           [&](const FeatureMatrix& f) { return f.name == options.prediction_feature_set; })
                             : std::find(used.begin(), used.end(), options.prediction_feature_set) != used.end();
      if (!known) throw FieldError("prediction_feature_set", "not among the feature sets used");
    }
    if (body.contains("thresholds")) {
      const json& t = body["thresholds"];
      if (!t.is_object()) throw FieldError("thresholds", "must be an object");
      ood::Thresholds th = ood::Thresholds::Default(d.classes());
      th.ood_hi = GetNumber(t, "ood_hi", th.ood_hi);
      th.conf_hi = GetNumber(t, "conf_hi", th.conf_hi);
      th.conf_reliable = GetNumber(t, "conf_reliable", th.conf_reliable);
      try {
        th.Validate(d.classes());
      } catch (const Error& e) {
        throw FieldError("thresholds", e.what());
      }
      options.thresholds = th;
    }
    options.score_all = true;
    const bool wait = GetBool(body, "wait", false) || QueryFlag(request, "wait");
    Session* session = s.get();
    return Submit(*s, "detect", wait, [session, options] { return RunDetect(*session, options); });
  }

  static json RunDetect(Session& s, const detect::DetectOptions& options) {
    const data::Dataset& d = *s.dataset;
    auto state = std::make_shared<DetectState>();
    state->result = detect::Detect(d, options);
    const ood::ScoreTable& table = state->result.scores;

    std::vector<std::string> sets = options.feature_sets;
    if (sets.empty()) {
      for (const auto& f : d.features) sets.push_back(f.name);
    }
    json coefficients = json::array();
    for (double c : ood::SelectCoefficients(options.n_models)) coefficients.push_back(c);
    const ood::Classifier& model = state->result.classifiers[table.prediction_model];

    json counts{{"train", json::object()}, {"test", json::object()}};
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    int n_test = 0;
    for (int r = 0; r < d.size(); ++r) {
      const ood::SampleScore& sc = table.samples[r];
      json& bucket = counts[SplitName(d.split[r])];
      const std::string type(ood::SampleTypeName(sc.sample_type));
      bucket[type] = bucket.value(type, 0) + 1;
      if (d.split[r] == data::Split::kTest) {
        lo = std::min(lo, sc.ood_score);
        hi = std::max(hi, sc.ood_score);
        sum += sc.ood_score;
        ++n_test;
      }
    }
    json summary{{"classes", d.manifest.classes},
                 {"n_models", options.n_models},
                 {"coefficients", coefficients},
                 {"feature_sets", sets},
                 {"classifiers", state->result.classifiers.size()},
                 {"prediction_model",
                  {{"feature_set", model.feature_set}, {"reg_coefficient", model.reg_coefficient}}},
                 {"thresholds", ThresholdsJson(table.thresholds)},
                 {"max_ood_score", std::log(static_cast<double>(d.classes()))},
                 {"test_ood_score", {{"min", lo}, {"max", hi}, {"mean", sum / n_test}}},
                 {"sample_types", counts}};
    if (!d.is_ood.empty()) {
      summary["evaluation"] = metrics::ResultJson(detect::Evaluate(d, state->result));
    }
    state->summary = summary;
    {
      std::lock_guard lock(s.mu);
      s.detect = state;
    }
    return summary;
  }

  Response Scores(const std::string& id, const Request& request) {
    auto s = FindSession(id);
    const data::Dataset& d = *s->dataset;
    auto q = [&](const std::string& key) {
      auto it = request.query.find(key);
      return it == request.query.end() ? std::string() : it->second;
    };
    std::string split = q("split");
    if (split.empty()) split = "test";
    if (split != "train" && split != "test" && split != "both") {
      throw FieldError("split", "must be one of train|test|both");
    }
    const std::vector<int> categories = ParseCategories(d, SplitCommas(q("categories")), "categories");
    auto state = s->Detected();
    if (!state) throw Error(ErrorCode::kConflict, "run detection before requesting scores");
    const ood::ScoreTable& table = state->result.scores;
    const double max_entropy = std::log(static_cast<double>(table.classes));
    json rows = json::array();
    for (int r : SelectRows(d, split, categories)) {
      const ood::SampleScore& sc = table.samples[r];
      rows.push_back({{"sample_id", d.sample_ids[r]},
                      {"split", SplitName(d.split[r])},
                      {"category", d.manifest.classes[d.labels[r]]},
                      {"ood_score", sc.ood_score},
                      {"ood_score_normalized", sc.ood_score / max_entropy},
                      {"confidence", sc.confidence},
                      {"predicted_class", d.manifest.classes[sc.predicted_class]},
                      {"sample_type", ood::SampleTypeName(sc.sample_type)}});
    }
    return JsonResponse(200, {{"classes", d.manifest.classes},
                              {"thresholds", ThresholdsJson(table.thresholds)},
                              {"rows", rows}});
  }

  // ---- layout and zoom ----

  const projection::ProjectedPoints& Projection(Session& s, std::uint64_t seed) const {
    const data::Dataset& d = *s.dataset;
    const std::uint64_t key = d.manifest.precomputed_2d_path ? 0 : seed;
    auto& slot = s.projections[key];
    if (!slot) {
      if (d.manifest.precomputed_2d_path) {
        slot = std::make_shared<const projection::ProjectedPoints>(
            projection::LoadPrecomputed(d.Resolve(*d.manifest.precomputed_2d_path), d.size()));
      } else {
        projection::TsneOptions options;
        options.seed = seed;
        options.iterations = config.tsne_iterations;
        options.perplexity = std::min(30.0, (d.size() - 1) / 3.0);
        slot = std::make_shared<const projection::ProjectedPoints>(
            projection::Tsne(d.features.front(), options));
      }
    }
    return *slot;
  }

  json NodeView(const Session& s, const LayoutState& layout, int node_id) const {
    const data::Dataset& d = *s.dataset;
    const sampling::Hierarchy& h = *layout.hierarchy;
    json node = h.NodeToJson(node_id);
    const ood::ScoreTable* table = layout.detect ? &layout.detect->result.scores : nullptr;
    for (json& cell : node["cells"]) {
      if (cell["sample_id"].is_null()) continue;
      const int r = cell["sample_id"].get<int>();
      cell["sample_id"] = d.sample_ids[r];
      cell["split"] = SplitName(d.split[r]);
      cell["category"] = d.manifest.classes[d.labels[r]];
      if (table) {
        cell["ood_score"] = table->samples[r].ood_score;
        cell["sample_type"] = ood::SampleTypeName(table->samples[r].sample_type);
      }
    }
    for (json& hidden : node["hidden"]) {
      hidden["sample_id"] = d.sample_ids[hidden["sample_id"].get<int>()];
      hidden["assigned_to"] = d.sample_ids[hidden["assigned_to"].get<int>()];
    }
    json counts = json::object();
    for (const auto& [key, count] : node["category_counts"].items()) {
      counts[d.manifest.classes[std::stoi(key)]] = count;
    }
    node["category_counts"] = counts;
    json reps = json::array();
    for (int r : h.Representatives(node_id)) reps.push_back(d.sample_ids[r]);
    node["representatives"] = reps;
    node["layout_id"] = layout.id;
    return node;
  }

  json LayoutView(const Session& s, const LayoutState& layout) const {
    json view = NodeView(s, layout, 0);
    view["request"] = layout.request;
    view["projection"] = layout.projection;
    view["scored"] = layout.detect != nullptr;
    view["warnings"] = layout.warnings;
    return view;
  }

  Response Layout(const std::string& id, const Request& request) {
    auto s = FindSession(id);
    const data::Dataset& d = *s->dataset;
    const json body = ParseBody(request.body);
    const std::string mode = GetString(body, "mode", "single", {"single", "juxtapose", "superpose"});
    const std::string split =
        GetString(body, "split", mode == "single" ? "test" : "both", {"train", "test", "both"});
    if (mode != "single" && split != "both") {
      throw FieldError("split", mode + " mode shows both splits; use \"both\"");
    }
    std::vector<int> categories;
    if (auto names = GetStrings(body, "categories")) categories = ParseCategories(d, *names, "categories");
    const int k = static_cast<int>(GetInt(body, "k", 100, 1, 1 << 30));
    const auto seed = static_cast<std::uint64_t>(GetInt(body, "seed", 0, 0, (1LL << 53)));
    const double alpha = GetNumber(body, "alpha", 0.5);
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw FieldError("alpha", "must be in [0, 1]");
    const int max_side = static_cast<int>(GetInt(body, "max_side", 45, 1, 1000));
    const bool wait = GetBool(body, "wait", false) || QueryFlag(request, "wait");

    std::vector<std::string> splits = mode == "juxtapose" ? std::vector<std::string>{"train", "test"}
                                                          : std::vector<std::string>{split};
    std::vector<std::pair<json, std::vector<int>>> parts;
    for (const std::string& part : splits) {
      json names = json::array();
      for (int c : categories) names.push_back(d.manifest.classes[c]);
      json canonical{{"mode", mode}, {"split", part},   {"categories", names}, {"k", k},
                     {"seed", seed}, {"alpha", alpha}, {"max_side", max_side}};
      std::vector<int> rows = SelectRows(d, part, categories);
      if (rows.empty()) throw Error(ErrorCode::kEmptySelection, "no " + part + " samples match the filter");
      parts.emplace_back(std::move(canonical), std::move(rows));
    }
    Session* session = s.get();
    return Submit(*s, "layout", wait, [this, session, mode, parts] {
      json layouts = json::array();
      for (const auto& [canonical, rows] : parts) {
        layouts.push_back(BuildLayout(*session, canonical, rows));
      }
      return json{{"mode", mode}, {"layouts", layouts}};
    });
  }

  json BuildLayout(Session& s, const json& canonical, const std::vector<int>& rows) const {
    const data::Dataset& d = *s.dataset;
    auto layout = std::make_shared<LayoutState>();
    layout->id = "L" + HashId(canonical.dump());
    layout->request = canonical;
    layout->detect = s.Detected();
    const projection::ProjectedPoints& points = Projection(s, canonical["seed"].get<std::uint64_t>());
    layout->projection = projection::MetadataJson(points, d.features.front().name);
    std::vector<double> scores(d.size(), 0.0);
    if (layout->detect) {
      for (int r = 0; r < d.size(); ++r) scores[r] = layout->detect->result.scores.samples[r].ood_score;
    }
    sampling::HierarchyConfig hc;
    hc.max_side = canonical["max_side"].get<int>();
    hc.alpha = canonical["alpha"].get<double>();
    hc.seed = canonical["seed"].get<std::uint64_t>();
    hc.k = canonical["k"].get<int>();
    layout->hierarchy = std::make_unique<sampling::Hierarchy>(points.coords, scores, d.labels, hc, rows);
    const sampling::HierarchyNode& root = layout->hierarchy->node(0);
    if (root.k_used < hc.k) {
      layout->warnings.push_back("k=" + std::to_string(hc.k) + " exceeds the " +
                                 std::to_string(root.grid_rows * root.grid_cols) +
                                 " grid cells; clamped to " + std::to_string(root.k_used));
    }
    json view = LayoutView(s, *layout);
    std::lock_guard lock(s.mu);
    s.layouts[layout->id] = layout;
    return view;
  }

  Response LayoutTree(const std::string& id, const std::string& layout_id) {
    auto s = FindSession(id);
    auto layout = s->FindLayout(layout_id);
    std::lock_guard lock(layout->mu);
    return JsonResponse(200, {{"layout_id", layout_id},
                              {"request", layout->request},
                              {"tree", layout->hierarchy->ToJson()}});
  }

  Response Node(const std::string& id, const std::string& layout_id, const std::string& node) {
    auto s = FindSession(id);
    auto layout = s->FindLayout(layout_id);
    std::lock_guard lock(layout->mu);
    return JsonResponse(200, NodeView(*s, *layout, std::stoi(node)));
  }

  Response Zoom(const std::string& id, const std::string& layout_id, const Request& request) {
    auto s = FindSession(id);
    auto layout = s->FindLayout(layout_id);
    const json body = ParseBody(request.body);
    const int parent = static_cast<int>(GetInt(body, "node_id", 0, 0, 1 << 30));
    if (!body.contains("region")) throw FieldError("region", "required");
    const json& r = body["region"];
    if (!r.is_object()) throw FieldError("region", "must be an object {row0, col0, row1, col1}");
    sampling::Region region;
    for (const char* key : {"row0", "col0", "row1", "col1"}) {
      if (!r.contains(key)) throw FieldError(std::string("region.") + key, "required");
    }
    region.row0 = static_cast<int>(GetInt(r, "row0", 0, 0, 1 << 20));
    region.col0 = static_cast<int>(GetInt(r, "col0", 0, 0, 1 << 20));
    region.row1 = static_cast<int>(GetInt(r, "row1", 0, 0, 1 << 20));
    region.col1 = static_cast<int>(GetInt(r, "col1", 0, 0, 1 << 20));
    if (region.row1 < region.row0 || region.col1 < region.col0) {
      throw FieldError("region", "row1 >= row0 and col1 >= col0 required");
    }
    Session* session = s.get();
    return Submit(*s, "zoom", true, [this, session, layout, parent, region] {
      std::lock_guard lock(layout->mu);
      const int child = layout->hierarchy->Zoom(parent, region);
      return NodeView(*session, *layout, child);
    });
  }

  // ---- persistence ----

  Response Persist(const std::string& id, const Request& request) {
    auto s = FindSession(id);
    const json body = ParseBody(request.body);
    if (!body.contains("artifact")) throw FieldError("artifact", "required");
    const std::string artifact = GetString(body, "artifact", "");
    data::ArtifactKind kind;
    try {
      kind = data::ParseArtifactKind(artifact);
    } catch (const Error& e) {
      throw FieldError("artifact", e.what());
    }
    const std::string run_id = GetString(body, "run_id", "default");
    if (!data::IsValidSampleId(run_id)) throw FieldError("run_id", "use only [A-Za-z0-9_.-]");
    const std::string layout_id = GetString(body, "layout_id", "");
    std::shared_ptr<LayoutState> layout;
    if (kind != data::ArtifactKind::kScores) {
      if (layout_id.empty()) throw FieldError("layout_id", "required for " + artifact);
      layout = s->FindLayout(layout_id);
    }
    Session* session = s.get();
    return Submit(*s, "persist", true, [this, session, kind, run_id, layout] {
      std::string content;
      if (kind == data::ArtifactKind::kScores) {
        auto state = session->Detected();
        if (!state) throw Error(ErrorCode::kConflict, "run detection before persisting scores");
        content = ood::ScoresCsv(state->result.scores, session->dataset->sample_ids);
      } else {
        std::lock_guard lock(layout->mu);
        content = (kind == data::ArtifactKind::kLayout ? LayoutView(*session, *layout)
                                                       : layout->hierarchy->ToJson())
                      .dump(2);
      }
      std::lock_guard lock(persist_mu);
      const fs::path path = data::Persist(kind, content, config.results_dir,
                                          session->dataset->manifest.name, run_id);
      return json{{"path", path.string()}};
    });
  }

  ServerConfig config;

  std::mutex datasets_mu;
  std::map<std::string, DatasetEntry> datasets;

  std::mutex persist_mu;

  std::mutex jobs_mu;
  int job_counter = 0;
  std::map<std::string, std::shared_ptr<Job>> jobs;

  // Declared last: destroying a session joins its worker, whose queued work
  // may still touch the members above.
  std::mutex sessions_mu;
  int session_counter = 0;
  std::map<std::string, std::shared_ptr<Session>> sessions;
};

Response Api::Impl::Handle(const Request& request) {
  using Handler = std::function<Response(const std::smatch&)>;
  struct Route {
    std::string method;
    std::regex pattern;
    Handler handler;
  };
  static const std::string seg = "([^/]+)";
  const std::vector<Route> routes{
      {"GET", std::regex("/api/datasets"), [&](const std::smatch&) { return ListDatasets(); }},
      {"POST", std::regex("/api/sessions"), [&](const std::smatch&) { return CreateSession(request); }},
      {"GET", std::regex("/api/sessions/" + seg), [&](const std::smatch& m) { return SessionInfo(m[1]); }},
      {"POST", std::regex("/api/sessions/" + seg + "/detect"),
       [&](const std::smatch& m) { return Detect(m[1], request); }},
      {"GET", std::regex("/api/sessions/" + seg + "/scores"),
       [&](const std::smatch& m) { return Scores(m[1], request); }},
      {"POST", std::regex("/api/sessions/" + seg + "/layout"),
       [&](const std::smatch& m) { return Layout(m[1], request); }},
      {"GET", std::regex("/api/sessions/" + seg + "/layouts/" + seg),
       [&](const std::smatch& m) { return LayoutTree(m[1], m[2]); }},
      {"GET", std::regex("/api/sessions/" + seg + "/layouts/" + seg + "/nodes/([0-9]{1,9})"),
       [&](const std::smatch& m) { return Node(m[1], m[2], m[3]); }},
      {"POST", std::regex("/api/sessions/" + seg + "/layouts/" + seg + "/zoom"),
       [&](const std::smatch& m) { return Zoom(m[1], m[2], request); }},
      {"POST", std::regex("/api/sessions/" + seg + "/persist"),
       [&](const std::smatch& m) { return Persist(m[1], request); }},
      {"GET", std::regex("/api/jobs/" + seg), [&](const std::smatch& m) { return JobStatus(m[1], request); }},
      {"GET", std::regex("/api/samples/" + seg + "/" + seg + "/(image|saliency)"),
       [&](const std::smatch& m) { return SampleFile(m[1], m[2], m[3]); }},
  };

  Response response;
  try {
    if (request.method == "OPTIONS") {
      response.status = 204;
      response.content_type = "text/plain";
      response.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      response.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type");
      response.headers.emplace_back("Access-Control-Max-Age", "600");
    } else {
      bool path_known = false;
      bool handled = false;
      std::smatch match;
      for (const Route& route : routes) {
        if (!std::regex_match(request.path, match, route.pattern)) continue;
        path_known = true;
        if (route.method != request.method) continue;
        response = route.handler(match);
        handled = true;
        break;
      }
      if (!handled) {
        response = path_known
                       ? JsonResponse(405, ErrorBody("method_not_allowed", request.method + " " + request.path))
                       : JsonResponse(404, ErrorBody("not_found", "no route " + request.path));
      }
    }
  } catch (const FieldError& e) {
    response = JsonResponse(400, ErrorBody(ErrorCodeName(e.code()), e.what(), e.field()));
  } catch (const Error& e) {
    response = JsonResponse(StatusFor(e.code()), ErrorBody(ErrorCodeName(e.code()), e.what()));
  } catch (const std::exception& e) {
    response = JsonResponse(500, ErrorBody("internal", e.what()));
  }
  response.headers.emplace_back("Access-Control-Allow-Origin", config.cors_origin);
  return response;
}

Api::Api(ServerConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Api::~Api() = default;

Response Api::Handle(const Request& request) { return impl_->Handle(request); }

struct HttpServer::Impl {
  Api& api;
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(new Impl{api, {}}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    Request request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    const Response out = impl_->api.Handle(request);
    res.status = out.status;
    for (const auto& [key, value] : out.headers) res.set_header(key, value);
    if (out.status != 204) res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Delete(".*", handler);
  impl_->server.Patch(".*", handler);
  impl_->server.Options(".*", handler);
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Listen() { return impl_->server.listen_after_bind(); }

void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace oodx::server
