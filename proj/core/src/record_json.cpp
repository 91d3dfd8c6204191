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

#include "metalake/record_json.hpp"

#include "metalake/error.hpp"

namespace metalake {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kInvalidInput, "malformed record JSON: " + what);
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing '") + key + "'");
  return j.at(key);
}

std::string get_string(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_string()) bad(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) bad(std::string("'") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

template <typename T>
std::optional<T> opt_integer(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_integer()) bad(std::string("'") + key + "' must be an integer");
  return j.at(key).get<T>();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) bad(std::string("'") + key + "' must be an array");
  for (const auto& v : arr) {
    if (!v.is_string()) bad(std::string("'") + key + "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void put(json& j, const char* key, const std::optional<std::string>& v) {
  if (v) j[key] = *v;
}

Timestamp get_timestamp(const json& j, const char* key) {
  auto t = parse_timestamp(get_string(j, key));
  if (!t) bad(std::string("'") + key + "' is not an ISO 8601 UTC timestamp");
  return *t;
}

}  // namespace

json to_json(const Identifier& identifier) {
  return {{"scheme", to_string(identifier.scheme)}, {"value", identifier.value}};
}

json to_json(const EmbeddedRelation& relation) {
  return {{"label", to_string(relation.label)}, {"target", to_json(relation.target)}};
}

json to_json(const DescriptiveBlock& d) {
  json j = json::object();
  j["title"] = d.title;
  json creators = json::array();
  for (const auto& c : d.creators) {
    json cj = {{"name", c.name}};
    put(cj, "identifier", c.identifier);
    creators.push_back(std::move(cj));
  }
  j["creators"] = std::move(creators);
  put(j, "publisher", d.publisher);
  if (d.publication_year) j["publicationYear"] = *d.publication_year;
  if (d.resource_type) j["resourceType"] = to_string(*d.resource_type);
  json ids = json::array();
  for (const auto& id : d.identifiers) ids.push_back(to_json(id));
  j["identifiers"] = std::move(ids);
  put(j, "description", d.description);
  j["subjects"] = d.subjects;
  put(j, "language", d.language);
  put(j, "rights", d.rights);
  put(j, "license", d.license);
  return j;
}

json to_json(const TechnicalBlock& t) {
  json j = json::object();
  put(j, "location", t.location);
  put(j, "format", t.format);
  if (t.size) j["size"] = *t.size;
  if (t.checksum) {
    j["checksum"] = {{"algorithm", t.checksum->algorithm}, {"digest", t.checksum->digest}};
  }
  return j;
}

json to_json(const MetadataRecord& r) {
  const auto& p = r.processual;
  return {
      {"descriptive", to_json(r.descriptive)},
      {"technical", to_json(r.technical)},
      {"processual",
       {{"recordId", p.record_id.str()},
        {"source", p.source},
        {"originalIdentifier", p.original_identifier},
        {"createdAt", format_timestamp(p.created_at)},
        {"modifiedAt", format_timestamp(p.modified_at)},
        {"dataSteward", p.data_steward},
        {"ingestFormat", to_string(p.ingest_format)}}},
      {"social",
       {{"keywords", r.social.keywords},
        {"viewCount", r.social.view_count},
        {"qualityScore", r.social.quality_score}}},
      {"raw",
       {{"payload", r.raw.payload}, {"encoding", "XML"}, {"mediaType", r.raw.media_type}}},
  };
}

json to_json(const ParsedFields& fields) {
  json relations = json::array();
  for (const auto& r : fields.embedded_relations) relations.push_back(to_json(r));
  return {{"descriptive", to_json(fields.descriptive)},
          {"technical", to_json(fields.technical)},
          {"embeddedRelations", std::move(relations)}};
}

Identifier identifier_from_json(const json& j) {
  auto scheme = parse_identifier_scheme(get_string(j, "scheme"));
  if (!scheme) bad("unknown identifier scheme");
  return {*scheme, get_string(j, "value")};
}

EmbeddedRelation relation_from_json(const json& j) {
  auto label = parse_relation_label(get_string(j, "label"));
  if (!label) bad("unknown relation label");
  return {identifier_from_json(member(j, "target")), *label};
}

DescriptiveBlock descriptive_from_json(const json& j) {
  DescriptiveBlock d;
  d.title = j.contains("title") ? get_string(j, "title") : std::string{};
  if (j.contains("creators")) {
    for (const auto& c : member(j, "creators")) {
      d.creators.push_back({get_string(c, "name"), opt_string(c, "identifier")});
    }
  }
  d.publisher = opt_string(j, "publisher");
  d.publication_year = opt_integer<int>(j, "publicationYear");
  if (auto rt = opt_string(j, "resourceType")) {
    d.resource_type = parse_resource_type(*rt);
    if (!d.resource_type) bad("unknown resourceType '" + *rt + "'");
  }
  if (j.contains("identifiers")) {
    for (const auto& id : member(j, "identifiers")) d.identifiers.push_back(identifier_from_json(id));
  }
  d.description = opt_string(j, "description");
  d.subjects = string_list(j, "subjects");
  d.language = opt_string(j, "language");
  d.rights = opt_string(j, "rights");
  d.license = opt_string(j, "license");
  return d;
}

TechnicalBlock technical_from_json(const json& j) {
  TechnicalBlock t;
  t.location = opt_string(j, "location");
  t.format = opt_string(j, "format");
  t.size = opt_integer<std::int64_t>(j, "size");
  if (j.contains("checksum")) {
    const json& c = member(j, "checksum");
    t.checksum = Checksum{get_string(c, "algorithm"), get_string(c, "digest")};
  }
  return t;
}

MetadataRecord record_from_json(const json& j) {
  MetadataRecord r;
  r.descriptive = descriptive_from_json(member(j, "descriptive"));
  r.technical = technical_from_json(member(j, "technical"));

  const json& p = member(j, "processual");
  auto id = RecordId::parse(get_string(p, "recordId"));
  if (!id) bad("malformed recordId");
  r.processual.record_id = *id;
  r.processual.source = get_string(p, "source");
  r.processual.original_identifier = get_string(p, "originalIdentifier");
  r.processual.created_at = get_timestamp(p, "createdAt");
  r.processual.modified_at = get_timestamp(p, "modifiedAt");
  r.processual.data_steward = get_string(p, "dataSteward");
  auto format = parse_source_format(get_string(p, "ingestFormat"));
  if (!format) bad("unknown ingestFormat");
  r.processual.ingest_format = *format;

  const json& s = member(j, "social");
  r.social.keywords = string_list(s, "keywords");
  r.social.view_count = opt_integer<std::uint64_t>(s, "viewCount").value_or(0);
  const json& q = member(s, "qualityScore");
  if (!q.is_number()) bad("qualityScore must be a number");
  r.social.quality_score = q.get<double>();

  const json& raw = member(j, "raw");
  r.raw.payload = get_string(raw, "payload");
  if (get_string(raw, "encoding") != "XML") bad("unsupported raw encoding");
  r.raw.media_type = get_string(raw, "mediaType");
  return r;
}

ParsedFields parsed_fields_from_json(const json& j) {
  ParsedFields f;
  f.descriptive = descriptive_from_json(member(j, "descriptive"));
  f.technical = technical_from_json(member(j, "technical"));
  if (j.contains("embeddedRelations")) {
    for (const auto& r : member(j, "embeddedRelations")) {
      f.embedded_relations.push_back(relation_from_json(r));
    }
  }
  return f;
}

}  // namespace metalake
