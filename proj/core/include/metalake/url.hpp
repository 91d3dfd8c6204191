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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metalake {

// Absolute http(s) URL split into the parts the HTTP client needs.
struct Url {
  std::string scheme;
  std::string host;
  int port = 0;
  std::string path = "/";
  std::string query;  // without '?', still percent-encoded

  // Throws Error(kInvalidInput) unless `text` is an absolute http(s) URL.
  static Url parse(std::string_view text);
  static bool is_absolute_http(std::string_view text);

  bool default_port() const;
  // scheme://host[:port]
  std::string origin() const;
  std::string path_and_query() const;
  std::string str() const;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

// RFC 3986 percent-encoding; unreserved characters pass through. With
// keep_slash, '/' is left as is (S3 object keys in paths).
std::string percent_encode(std::string_view text, bool keep_slash = false);
std::string percent_decode(std::string_view text);
std::string build_query(const QueryParams& params);

}  // namespace metalake
