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

#include "metalake/http_client.hpp"

#include <cctype>
#include <thread>

#include <httplib.h>

#include "metalake/error.hpp"

namespace metalake {

namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

class DefaultHttpClient final : public HttpClient {
 public:
  explicit DefaultHttpClient(RetryPolicy policy) : policy_(policy) {}

  HttpResponse get(const Url& url, const HttpHeaders& headers) override {
    auto backoff = policy_.initial_backoff;
    std::string last_error;
    HttpResponse last;
    const int attempts = std::max(1, policy_.max_attempts);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      httplib::Client client(url.origin());
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(policy_.timeout);
      const auto usecs =
          std::chrono::duration_cast<std::chrono::microseconds>(policy_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_follow_location(true);

      httplib::Headers request_headers;
      for (const auto& [k, v] : headers) request_headers.emplace(k, v);
      auto result = client.Get(url.path_and_query(), request_headers);
      if (!result) {
        last_error = httplib::to_string(result.error());
        last.status = 0;
        continue;
      }
      last.status = result->status;
      last.body = std::move(result->body);
      last.headers.clear();
      for (const auto& [k, v] : result->headers) {
        std::string name;
        for (char c : k) name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        last.headers.emplace(std::move(name), v);
      }
      if (!retryable(last.status)) return last;
    }
    if (last.status == 0) {
      throw TransportError(0, "GET " + url.str() + " failed after " + std::to_string(attempts) +
                                  " attempts: " + last_error);
    }
    return last;
  }

 private:
  RetryPolicy policy_;
};

}  // namespace

std::unique_ptr<HttpClient> make_http_client(RetryPolicy policy) {
  return std::make_unique<DefaultHttpClient>(policy);
}

}  // namespace metalake
