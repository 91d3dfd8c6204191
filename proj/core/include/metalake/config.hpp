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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "metalake/http_client.hpp"
#include "metalake/source.hpp"

namespace metalake {

inline constexpr int kDefaultPort = 8343;
inline constexpr const char* kConfigEnvVar = "METALAKE_CONFIG";

// Service configuration file:
//
//   {
//     "listen": {"address": "127.0.0.1", "port": 8343},
//     "dataDir": "data",
//     "commandToken": "secret",
//     "transport": {"attempts": 3, "backoffMs": 1000, "timeoutMs": 30000},
//     "sources": {"name": {SourceConfig}, ...}
//   }
//
// Every key is optional. A relative dataDir is resolved against the
// directory of the file.
struct ServiceConfig {
  std::string address = "127.0.0.1";
  int port = kDefaultPort;
  std::filesystem::path data_dir = "data";
  std::optional<std::string> command_token;
  RetryPolicy transport;
  std::vector<std::pair<std::string, SourceConfig>> sources;
};

// Throws Error(kInvalidInput) naming the offending key.
ServiceConfig config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
ServiceConfig load_config(const std::filesystem::path& path);

// `explicit_path` if given, else $METALAKE_CONFIG, else nothing.
std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path);

}  // namespace metalake
