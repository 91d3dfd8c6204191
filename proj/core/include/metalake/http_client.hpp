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

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "metalake/url.hpp"

namespace metalake {

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;  // lowercase names

  bool ok() const { return status >= 200 && status < 300; }
};

struct RetryPolicy {
  int max_attempts = 3;
  // Delay before the second attempt; doubles for every further attempt.
  std::chrono::milliseconds initial_backoff{1000};
  std::chrono::milliseconds timeout{30000};
};

// GET-only HTTP client used by the harvesters.
class HttpClient {
 public:
  virtual ~HttpClient() = default;

  // Returns the final response, retrying connection failures, 429 and 5xx
  // according to the policy. Throws TransportError when no response could be
  // obtained at all.
  virtual HttpResponse get(const Url& url, const HttpHeaders& headers = {}) = 0;
};

std::unique_ptr<HttpClient> make_http_client(RetryPolicy policy = {});

}  // namespace metalake
