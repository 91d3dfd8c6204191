// Copyright 2026 The metalake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "metalake/ingest_service.hpp"
#include "metalake/store.hpp"

namespace metalake {

inline constexpr std::string_view kJsonApiMediaType = "application/vnd.api+json";
inline constexpr std::string_view kApiPrefix = "/api/v1";

struct ApiRequest {
  std::string method;
  std::string path;  // decoded, without query
  std::vector<std::pair<std::string, std::string>> query;  // decoded
  std::map<std::string, std::string> headers;               // lowercase names
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type{kJsonApiMediaType};
  std::map<std::string, std::string> headers;
  std::string body;
};

struct ApiOptions {
  // Required as "Authorization: Bearer <token>" on command endpoints.
  std::optional<std::string> command_token;
  // Used for links when the request carries no Host header.
  std::string fallback_origin = "http://localhost:8343";
  // Record fetches increment the view counter.
  bool count_views = true;
};

// Transport-independent request handling for the /api/v1 routes. Until a
// store is attached, and again after detach(), every route except the
// schema documents answers 503.
class Api {
 public:
  explicit Api(ApiOptions options = {});

  void attach(Store& store, IngestService& ingest);
  // Blocks until in-flight requests using the store have finished.
  void detach();
  bool ready() const;

  ApiResponse handle(const ApiRequest& request) const;

  struct Context;

 private:
  ApiResponse dispatch(const ApiRequest& request, const Context& ctx) const;
  ApiResponse get_ready(const Context& ctx) const;
  ApiResponse get_record(const Context& ctx, std::string_view id) const;
  ApiResponse get_search(const Context& ctx, const ApiRequest& request) const;
  ApiResponse get_sources(const Context& ctx) const;
  ApiResponse get_source(const Context& ctx, std::string_view ref) const;
  ApiResponse post_source(const Context& ctx, const ApiRequest& request) const;
  ApiResponse post_ingest(const Context& ctx, const ApiRequest& request) const;
  ApiResponse get_jobs(const Context& ctx) const;
  ApiResponse get_job(const Context& ctx, std::string_view id) const;
  ApiResponse get_stats(const Context& ctx) const;
  ApiResponse get_schemas(const Context& ctx) const;
  ApiResponse get_schema(const Context& ctx, std::string_view name) const;
  ApiResponse get_openapi(const Context& ctx) const;

  ApiOptions options_;
  mutable std::shared_mutex mutex_;
  Store* store_ = nullptr;
  IngestService* ingest_ = nullptr;
};

// Names of the served JSON Schemas, sorted.
std::vector<std::string> api_schema_names();
// Schema document by name, if it exists.
std::optional<nlohmann::json> api_schema(std::string_view name);
// OpenAPI 3 description of every route; `origin` becomes the server URL.
nlohmann::json openapi_document(std::string_view origin);

// Binds an Api to an HTTP/1.1 listener.
class ApiServer {
 public:
  explicit ApiServer(Api& api);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error(kIo).
  int bind(const std::string& address, int port);
  // Serves until stop(); call after bind.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace metalake
