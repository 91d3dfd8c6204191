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

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "metalake/model.hpp"

namespace metalake {

enum class Protocol { kOAIPMH, kGET, kS3 };

std::string_view to_string(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

// Username/password for HTTP sources; access key/secret key for S3.
struct Credentials {
  std::string username;
  std::string password;

  friend bool operator==(const Credentials&, const Credentials&) = default;
};

struct SourceConfig {
  std::string location;
  Protocol protocol = Protocol::kOAIPMH;
  Encoding encoding = Encoding::kXML;
  SourceFormat format = SourceFormat::kDataCite;
  std::string data_steward;
  std::optional<Credentials> credentials;
  std::optional<std::string> oai_set;
  // Empty selects default_metadata_prefix(format).
  std::string oai_metadata_prefix;

  std::string metadata_prefix() const;

  friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

// datacite, oai_dc, lido, marc21, mods.
std::string_view default_metadata_prefix(SourceFormat format);

// Stable id of a source: base64url of xxh64(location U+001F format).
std::string source_id(const SourceConfig& source);

ValidationReport validate_source(const SourceConfig& source);

// Credentials are written only with include_secrets; otherwise the
// password is dropped and the username kept.
nlohmann::json to_json(const SourceConfig& source, bool include_secrets = false);

// Reads the wire form, collecting every problem into `violations` instead
// of stopping at the first; the returned value is meaningful only when no
// violations were added. Semantic checks of validate_source are included.
SourceConfig source_from_json(const nlohmann::json& j, ValidationReport& violations);

}  // namespace metalake
