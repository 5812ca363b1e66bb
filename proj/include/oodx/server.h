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


#ifndef OODX_SERVER_H_
#define OODX_SERVER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace oodx::server {

struct ServerConfig {
  // Every directory holding a manifest.json, the root itself included, is
  // served as a dataset named after its manifest.
  std::filesystem::path data_dir;
  // Persisted artifacts; defaults to <data_dir>/results.
  std::filesystem::path results_dir;
  std::string cors_origin = "*";
  // Used only when a dataset has no precomputed 2D coordinates.
  int tsne_iterations = 1000;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

// The JSON API without any transport. Thread-safe; mutating requests on one
// session run in arrival order on that session's worker.
class Api {
 public:
  explicit Api(ServerConfig config);
  ~Api();
  Api(const Api&) = delete;
  Api& operator=(const Api&) = delete;

  Response Handle(const Request& request);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// cpp-httplib front end for an Api.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();

  // Returns the bound port; port 0 picks a free one. -1 on failure.
  int Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace oodx::server

#endif  // OODX_SERVER_H_
