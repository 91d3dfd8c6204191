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

#include "metalake/config.hpp"

#include <cstdlib>
#include <fstream>

#include "metalake/error.hpp"

namespace metalake {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& problem) {
  throw Error(ErrorCode::kInvalidInput, "config: '" + key + "' " + problem);
}

const json* object_member(const json& j, const char* key) {
  if (!j.contains(key)) return nullptr;
  if (!j.at(key).is_object()) bad(key, "must be an object");
  return &j.at(key);
}

std::int64_t positive_int(const json& j, const char* key, const std::string& path,
                          std::int64_t fallback, std::int64_t min, std::int64_t max) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < min || v.get<std::int64_t>() > max) {
    bad(path, "must be an integer in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
  }
  return v.get<std::int64_t>();
}

}  // namespace

ServiceConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad("", "top level must be an object");
  ServiceConfig config;
  if (const json* listen = object_member(j, "listen")) {
    if (listen->contains("address")) {
      if (!listen->at("address").is_string()) bad("listen.address", "must be a string");
      config.address = listen->at("address").get<std::string>();
    }
    config.port = static_cast<int>(positive_int(*listen, "port", "listen.port", kDefaultPort, 0, 65535));
  }
  if (j.contains("dataDir")) {
    if (!j.at("dataDir").is_string()) bad("dataDir", "must be a string");
    config.data_dir = j.at("dataDir").get<std::string>();
  }
  if (config.data_dir.is_relative() && !base_dir.empty()) config.data_dir = base_dir / config.data_dir;
  if (j.contains("commandToken") && !j.at("commandToken").is_null()) {
    if (!j.at("commandToken").is_string()) bad("commandToken", "must be a string");
    config.command_token = j.at("commandToken").get<std::string>();
  }
  if (const json* transport = object_member(j, "transport")) {
    config.transport.max_attempts =
        static_cast<int>(positive_int(*transport, "attempts", "transport.attempts", 3, 1, 10));
    config.transport.initial_backoff = std::chrono::milliseconds(
        positive_int(*transport, "backoffMs", "transport.backoffMs", 1000, 0, 600000));
    config.transport.timeout = std::chrono::milliseconds(
        positive_int(*transport, "timeoutMs", "transport.timeoutMs", 30000, 1, 3600000));
  }
  if (const json* sources = object_member(j, "sources")) {
    for (const auto& [name, body] : sources->items()) {
      ValidationReport violations;
      SourceConfig source = source_from_json(body, violations);
      if (!violations.empty()) {
        bad("sources." + name + "." + violations.front().field, violations.front().problem);
      }
      config.sources.emplace_back(name, std::move(source));
    }
  }
  return config;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, path.string() + ": " + e.what());
  }
  return config_from_json(j, std::filesystem::absolute(path).parent_path());
}

std::optional<std::filesystem::path> resolve_config_path(
    const std::optional<std::filesystem::path>& explicit_path) {
  if (explicit_path) return explicit_path;
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

}  // namespace metalake
