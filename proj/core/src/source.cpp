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

#include "metalake/source.hpp"

#include "metalake/record_id.hpp"
#include "metalake/url.hpp"

namespace metalake {

using nlohmann::json;

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::kOAIPMH:
      return "OAIPMH";
    case Protocol::kGET:
      return "GET";
    case Protocol::kS3:
      return "S3";
  }
  return "OAIPMH";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  for (auto p : {Protocol::kOAIPMH, Protocol::kGET, Protocol::kS3}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view default_metadata_prefix(SourceFormat format) {
  switch (format) {
    case SourceFormat::kDataCite:
      return "datacite";
    case SourceFormat::kDublinCore:
      return "oai_dc";
    case SourceFormat::kLIDO:
      return "lido";
    case SourceFormat::kMARC:
      return "marc21";
    case SourceFormat::kMODS:
      return "mods";
  }
  return "oai_dc";
}

std::string SourceConfig::metadata_prefix() const {
  return oai_metadata_prefix.empty() ? std::string(default_metadata_prefix(format))
                                     : oai_metadata_prefix;
}

std::string source_id(const SourceConfig& source) {
  std::string key = source.location;
  key.push_back(kKeySeparator);
  key.append(to_string(source.format));
  return RecordId::from_digest(xxh64(key)).str();
}

ValidationReport validate_source(const SourceConfig& source) {
  ValidationReport report;
  if (source.location.empty()) {
    report.push_back({"location", "missing"});
  } else if (!Url::is_absolute_http(source.location)) {
    report.push_back({"location", "not an absolute http(s) URL"});
  }
  if (source.data_steward.find_first_not_of(" \t\r\n") == std::string::npos) {
    report.push_back({"dataSteward", "missing"});
  }
  if (source.credentials && source.credentials->username.empty()) {
    report.push_back({"credentials.username", "empty"});
  }
  if (source.protocol == Protocol::kS3 && Url::is_absolute_http(source.location)) {
    auto url = Url::parse(source.location);
    if (url.path.size() <= 1) report.push_back({"location", "no bucket in path"});
  }
  return report;
}

json to_json(const SourceConfig& s, bool include_secrets) {
  json j = {{"location", s.location},
            {"protocol", to_string(s.protocol)},
            {"encoding", "XML"},
            {"format", to_string(s.format)},
            {"dataSteward", s.data_steward},
            {"oaiMetadataPrefix", s.metadata_prefix()}};
  if (s.oai_set) j["oaiSet"] = *s.oai_set;
  if (s.credentials) {
    j["credentials"] = {{"username", s.credentials->username}};
    if (include_secrets) j["credentials"]["password"] = s.credentials->password;
  }
  return j;
}

namespace {

std::optional<std::string> read_string(const json& j, const char* key, bool required,
                                       ValidationReport& violations,
                                       const std::string& path_prefix = {}) {
  const std::string path = path_prefix + key;
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) violations.push_back({path, "missing"});
    return std::nullopt;
  }
  if (!j.at(key).is_string()) {
    violations.push_back({path, "must be a string"});
    return std::nullopt;
  }
  return j.at(key).get<std::string>();
}

}  // namespace

SourceConfig source_from_json(const json& j, ValidationReport& violations) {
  SourceConfig s;
  if (!j.is_object()) {
    violations.push_back({"", "must be an object"});
    return s;
  }
  static constexpr std::string_view kKnown[] = {
      "location", "protocol",   "encoding",         "format",
      "dataSteward", "credentials", "oaiSet", "oaiMetadataPrefix"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : kKnown) known = known || k == key;
    if (!known) violations.push_back({key, "unknown field"});
  }

  const std::size_t before = violations.size();
  if (auto v = read_string(j, "location", true, violations)) s.location = *v;
  if (auto v = read_string(j, "protocol", true, violations)) {
    if (auto p = parse_protocol(*v)) {
      s.protocol = *p;
    } else {
      violations.push_back({"protocol", "must be one of OAIPMH, GET, S3"});
    }
  }
  if (auto v = read_string(j, "encoding", false, violations); v && *v != "XML") {
    violations.push_back({"encoding", "must be XML"});
  }
  if (auto v = read_string(j, "format", true, violations)) {
    if (auto f = parse_source_format(*v)) {
      s.format = *f;
    } else {
      violations.push_back({"format", "must be one of DataCite, DublinCore, LIDO, MARC, MODS"});
    }
  }
  if (auto v = read_string(j, "dataSteward", true, violations)) s.data_steward = *v;
  s.oai_set = read_string(j, "oaiSet", false, violations);
  if (auto v = read_string(j, "oaiMetadataPrefix", false, violations)) {
    s.oai_metadata_prefix = *v;
  }
  if (j.contains("credentials") && !j.at("credentials").is_null()) {
    const json& c = j.at("credentials");
    if (!c.is_object()) {
      violations.push_back({"credentials", "must be an object"});
    } else {
      Credentials creds;
      if (auto v = read_string(c, "username", true, violations, "credentials.")) {
        creds.username = *v;
      }
      if (auto v = read_string(c, "password", true, violations, "credentials.")) {
        creds.password = *v;
      }
      s.credentials = std::move(creds);
    }
  }

  for (auto& v : validate_source(s)) {
    bool duplicate = false;
    for (std::size_t i = before; i < violations.size(); ++i) {
      duplicate = duplicate || violations[i].field == v.field;
    }
    if (!duplicate) violations.push_back(std::move(v));
  }
  return s;
}

}  // namespace metalake
