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

#include <algorithm>

#include "metalake/api.hpp"
#include "metalake/filter_expr.hpp"
#include "metalake/pipeline.hpp"

namespace metalake {

using nlohmann::json;

namespace {

constexpr const char* kDialect = "https://json-schema.org/draft/2020-12/schema";
constexpr const char* kIdPattern = "^[A-Za-z0-9_-]{11}$";
constexpr const char* kTimestampPattern = "^[0-9]{4}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}\\.[0-9]{3}Z$";

json str() { return {{"type", "string"}}; }
json nonempty() { return {{"type", "string"}, {"minLength", 1}}; }
json integer(std::int64_t min) { return {{"type", "integer"}, {"minimum", min}}; }
json array_of(json items) { return {{"type", "array"}, {"items", std::move(items)}}; }
json ref(const std::string& def) { return {{"$ref", "#/$defs/" + def}}; }

json object(json properties, std::vector<std::string> required, bool closed = true) {
  json j = {{"type", "object"}, {"properties", std::move(properties)}};
  if (!required.empty()) j["required"] = std::move(required);
  if (closed) j["additionalProperties"] = false;
  return j;
}

template <typename Range>
json enum_of(const Range& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(std::string(to_string(v)));
  return {{"type", "string"}, {"enum", std::move(out)}};
}

json resource_types() {
  json out = json::array();
  for (std::size_t i = 0; i < kResourceTypeCount; ++i) {
    out.push_back(std::string(to_string(static_cast<ResourceType>(i))));
  }
  return {{"type", "string"}, {"enum", std::move(out)}};
}

json identifier_schemes() {
  json out = json::array();
  for (auto s : {IdentifierScheme::kDOI, IdentifierScheme::kURN, IdentifierScheme::kHandle,
                 IdentifierScheme::kISBN, IdentifierScheme::kISSN, IdentifierScheme::kURL,
                 IdentifierScheme::kOther}) {
    out.push_back(std::string(to_string(s)));
  }
  return {{"type", "string"}, {"enum", std::move(out)}};
}

json links_schema(std::vector<std::string> extra = {}) {
  json props = {{"self", str()}, {"describedby", str()}};
  for (const auto& name : extra) props[name] = str();
  return object(std::move(props), {"self", "describedby"});
}

json common_defs() {
  return {
      {"recordId", {{"type", "string"}, {"pattern", kIdPattern}}},
      {"timestamp", {{"type", "string"}, {"pattern", kTimestampPattern}}},
      {"identifier", object({{"scheme", identifier_schemes()}, {"value", nonempty()}},
                            {"scheme", "value"})},
      {"creator", object({{"name", nonempty()}, {"identifier", str()}}, {"name"})},
  };
}

json document(const std::string& title, json properties, std::vector<std::string> required,
              json defs = json::object()) {
  json all_defs = common_defs();
  all_defs.update(defs);
  json j = object(std::move(properties), std::move(required));
  j["$schema"] = kDialect;
  j["title"] = title;
  j["$defs"] = std::move(all_defs);
  return j;
}

json envelope(const std::string& title, json data, std::vector<std::string> links_extra = {},
              std::optional<json> meta = std::nullopt, json defs = json::object()) {
  json props = {{"data", std::move(data)}, {"links", links_schema(std::move(links_extra))}};
  std::vector<std::string> required = {"data", "links"};
  if (meta) {
    props["meta"] = std::move(*meta);
    required.push_back("meta");
  }
  return document(title, std::move(props), std::move(required), std::move(defs));
}

json resource(const std::string& type, json id, json attributes,
              std::optional<json> extra = std::nullopt) {
  json props = {{"type", {{"const", type}}}, {"id", std::move(id)}, {"attributes", std::move(attributes)},
                {"links", object({{"self", str()}}, {"self"})}};
  if (extra) props.update(*extra);
  return object(std::move(props), {"type", "id", "attributes"});
}

json record_attributes() {
  json descriptive = object(
      {{"title", nonempty()},
       {"creators", array_of(ref("creator"))},
       {"publisher", str()},
       {"publicationYear", {{"type", "integer"}, {"minimum", 0}, {"maximum", 9999}}},
       {"resourceType", resource_types()},
       {"identifiers", array_of(ref("identifier"))},
       {"description", str()},
       {"subjects", array_of(str())},
       {"language", str()},
       {"rights", str()},
       {"license", str()}},
      {"title", "creators", "identifiers", "subjects"});
  json technical = object(
      {{"location", str()},
       {"format", str()},
       {"size", integer(0)},
       {"checksum", object({{"algorithm", nonempty()},
                            {"digest", {{"type", "string"}, {"pattern", "^[0-9a-f]+$"}}}},
                           {"algorithm", "digest"})}},
      {});
  json processual = object({{"recordId", ref("recordId")},
                            {"source", str()},
                            {"originalIdentifier", nonempty()},
                            {"createdAt", ref("timestamp")},
                            {"modifiedAt", ref("timestamp")},
                            {"dataSteward", nonempty()},
                            {"ingestFormat", enum_of(kAllSourceFormats)}},
                           {"recordId", "source", "originalIdentifier", "createdAt",
                            "modifiedAt", "dataSteward", "ingestFormat"});
  json social = object({{"keywords", array_of(str())},
                        {"viewCount", integer(0)},
                        {"qualityScore", {{"type", "number"}, {"minimum", 0}, {"maximum", 1}}}},
                       {"keywords", "viewCount", "qualityScore"});
  json raw = object({{"payload", str()},
                     {"encoding", {{"const", "XML"}}},
                     {"mediaType", nonempty()}},
                    {"payload", "encoding", "mediaType"});
  return object({{"descriptive", std::move(descriptive)},
                 {"technical", std::move(technical)},
                 {"processual", std::move(processual)},
                 {"social", std::move(social)},
                 {"raw", std::move(raw)}},
                {"descriptive", "technical", "processual", "social", "raw"});
}

json relationships() {
  json linkage = object({{"type", {{"const", "metadata"}}},
                         {"id", ref("recordId")},
                         {"meta", object({{"direction", {{"type", "string"}, {"enum", json::array({"in", "out"})}}}},
                                         {"direction"})}},
                        {"type", "id", "meta"});
  json labels = json::object();
  for (auto label : kAllRelationLabels) {
    labels[std::string(to_string(label))] =
        object({{"data", array_of(linkage)}}, {"data"});
  }
  return object(std::move(labels), {});
}

json source_attributes(bool with_secret) {
  json credentials = with_secret
                         ? object({{"username", nonempty()}, {"password", str()}},
                                  {"username", "password"})
                         : object({{"username", nonempty()}}, {"username"});
  return object({{"location", {{"type", "string"}, {"minLength", 1}, {"pattern", "^[Hh][Tt][Tt][Pp][Ss]?://"}}},
                 {"protocol", {{"type", "string"}, {"enum", {"OAIPMH", "GET", "S3"}}}},
                 {"encoding", {{"const", "XML"}}},
                 {"format", enum_of(kAllSourceFormats)},
                 {"dataSteward", {{"type", "string"}, {"minLength", 1}, {"pattern", "\\S"}}},
                 {"credentials", std::move(credentials)},
                 {"oaiSet", str()},
                 {"oaiMetadataPrefix", str()}},
                {"location", "protocol", "format", "dataSteward"});
}

json source_resource() {
  json attributes = source_attributes(false);
  attributes["properties"]["name"] = nonempty();
  attributes["properties"]["sourceId"] = nonempty();
  attributes["properties"]["lastSuccessStart"] = ref("timestamp");
  attributes["required"] = {"name", "sourceId", "location", "protocol", "encoding", "format", "dataSteward",
                            "oaiMetadataPrefix"};
  return resource("source", nonempty(), std::move(attributes));
}

json job_resource() {
  json states = json::array();
  for (auto s : {JobState::kPending, JobState::kExtracting, JobState::kTransforming,
                 JobState::kLoading, JobState::kLinking, JobState::kDone, JobState::kFailed}) {
    states.push_back(std::string(to_string(s)));
  }
  json state = {{"type", "string"}, {"enum", states}};
  json attributes = object(
      {{"source", nonempty()},
       {"sourceId", nonempty()},
       {"state", state},
       {"history", array_of(state)},
       {"since", str()},
       {"counts", object({{"seen", integer(0)},
                          {"loaded", integer(0)},
                          {"skipped", integer(0)},
                          {"failed", integer(0)}},
                         {"seen", "loaded", "skipped", "failed"})},
       {"startedAt", ref("timestamp")},
       {"finishedAt", ref("timestamp")},
       {"errors", array_of(object({{"originalIdentifier", str()}, {"message", str()}},
                                  {"originalIdentifier", "message"}))},
       {"failure", str()},
       {"resumptionCursor", str()},
       {"edgesCreated", integer(0)}},
      {"source", "sourceId", "state", "history", "counts", "errors", "edgesCreated"});
  return resource("ingest-job", nonempty(), std::move(attributes));
}

json facet_counts() {
  json props = json::object();
  for (auto f : kAllFacetFields) {
    props[std::string(to_string(f))] = {{"type", "object"}, {"additionalProperties", integer(1)}};
  }
  return object(std::move(props), {});
}

json build(std::string_view name) {
  if (name == "status") {
    return envelope("Service readiness",
                    resource("status", {{"const", "ready"}},
                             object({{"status", {{"const", "ok"}}}}, {"status"})));
  }
  if (name == "metadata-record") {
    return envelope("Metadata record",
                    resource("metadata", ref("recordId"), ref("record"),
                             json{{"relationships", relationships()}}),
                    {}, std::nullopt, {{"record", record_attributes()}});
  }
  if (name == "search-results") {
    json attributes = object({{"title", nonempty()},
                              {"creators", array_of(ref("creator"))},
                              {"publicationYear", {{"type", "integer"}}},
                              {"resourceType", resource_types()},
                              {"source", str()}},
                             {"title", "creators", "source"});
    json hit = resource("metadata", ref("recordId"), std::move(attributes),
                        json{{"meta", object({{"score", {{"type", "number"}, {"minimum", 0}}}}, {})}});
    json meta = object({{"total", integer(0)},
                        {"page", object({{"number", integer(1)},
                                         {"size", {{"type", "integer"}, {"minimum", 1}, {"maximum", 100}}},
                                         {"totalPages", integer(0)}},
                                        {"number", "size", "totalPages"})},
                        {"facetCounts", facet_counts()}},
                       {"total", "page", "facetCounts"});
    return envelope("Search results", array_of(std::move(hit)), {"first", "last", "prev", "next"},
                    std::move(meta));
  }
  if (name == "source-config") {
    json j = source_attributes(true);
    j["$schema"] = kDialect;
    j["title"] = "Source registration request";
    return j;
  }
  if (name == "source") return envelope("Registered source", source_resource());
  if (name == "source-list") return envelope("Registered sources", array_of(source_resource()));
  if (name == "ingest-request") {
    json j = object({{"sourceRef", nonempty()},
                     {"since", {{"type", "string"}, {"pattern", "^[0-9]{4}-[0-9]{2}-[0-9]{2}"}}}},
                    {"sourceRef"});
    j["$schema"] = kDialect;
    j["title"] = "Ingest request";
    return j;
  }
  if (name == "ingest-job") return envelope("Ingest job", job_resource());
  if (name == "ingest-job-list") return envelope("Ingest jobs", array_of(job_resource()));
  if (name == "stats") {
    json counts = {{"type", "object"}, {"additionalProperties", integer(0)}};
    return envelope("Store statistics",
                    resource("stats", {{"const", "store"}},
                             object({{"recordCount", integer(0)},
                                     {"edgeCount", integer(0)},
                                     {"perSource", counts},
                                     {"perFormat", counts}},
                                    {"recordCount", "edgeCount", "perSource", "perFormat"})));
  }
  if (name == "schema-list") {
    return envelope("Served schemas",
                    array_of(resource("schema", nonempty(), object({{"url", str()}}, {"url"}))));
  }
  if (name == "error") {
    json error = object({{"status", {{"type", "string"}, {"pattern", "^[45][0-9]{2}$"}}},
                         {"code", nonempty()},
                         {"title", nonempty()},
                         {"detail", str()},
                         {"source", object({{"pointer", str()}, {"parameter", str()}}, {})},
                         {"meta", {{"type", "object"}}}},
                        {"status", "code", "title"});
    json errors = array_of(std::move(error));
    errors["minItems"] = 1;
    return document("Error response",
                    {{"errors", std::move(errors)}, {"links", links_schema()}},
                    {"errors", "links"});
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> api_schema_names() {
  std::vector<std::string> names = {"error",          "ingest-job",      "ingest-job-list",
                                    "ingest-request", "metadata-record", "schema-list",
                                    "search-results", "source",          "source-config",
                                    "source-list",    "stats",           "status"};
  std::sort(names.begin(), names.end());
  return names;
}

std::optional<json> api_schema(std::string_view name) {
  json j = build(name);
  if (j.is_null()) return std::nullopt;
  return j;
}

namespace {

json op(const std::string& summary, const std::string& schema, std::vector<int> statuses,
        json parameters = json::array(), std::optional<std::string> request_schema = std::nullopt) {
  json responses = json::object();
  for (int status : statuses) {
    const bool ok = status < 400;
    responses[std::to_string(status)] = {
        {"description", ok ? "Success" : "Error"},
        {"content",
         {{std::string(kJsonApiMediaType),
           {{"schema", {{"$ref", "/api/v1/schemas/" + (ok ? schema : std::string("error"))}}}}}}}};
  }
  json j = {{"summary", summary}, {"responses", std::move(responses)}};
  if (!parameters.empty()) j["parameters"] = std::move(parameters);
  if (request_schema) {
    j["requestBody"] = {
        {"required", true},
        {"content", {{"application/json", {{"schema", {{"$ref", "/api/v1/schemas/" + *request_schema}}}}}}}};
    j["security"] = json::array({{{"bearer", json::array()}}, json::object()});
  }
  return j;
}

json path_param(const std::string& name) {
  return {{"name", name}, {"in", "path"}, {"required", true}, {"schema", {{"type", "string"}}}};
}

json query_param(const std::string& name, const std::string& description,
                 json schema = {{"type", "string"}}) {
  return {{"name", name}, {"in", "query"}, {"required", false},
          {"description", description}, {"schema", std::move(schema)}};
}

json document_op(const std::string& summary, std::vector<int> statuses,
                 json parameters = json::array()) {
  json responses = json::object();
  for (int status : statuses) {
    responses[std::to_string(status)] = {{"description", status < 400 ? "Success" : "Error"},
                                         {"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}};
  }
  json j = {{"summary", summary}, {"responses", std::move(responses)}};
  if (!parameters.empty()) j["parameters"] = std::move(parameters);
  return j;
}

}  // namespace

json openapi_document(std::string_view origin) {
  json search_params = json::array(
      {query_param("q", "Full-text query; all tokens must match"),
       query_param("query", "Filter expression over record fields, e.g. descriptive.publicationYear >= 2020"),
       query_param("page[number]", "1-based page number", {{"type", "integer"}, {"minimum", 1}}),
       query_param("page[size]", "Page size", {{"type", "integer"}, {"minimum", 1}, {"maximum", 100}})});
  for (auto f : kAllFacetFields) {
    search_params.push_back(query_param("filter[" + std::string(to_string(f)) + "]", "Facet value"));
  }

  json paths = {
      {"/api/v1/ready", {{"get", op("Readiness", "status", {200, 503})}}},
      {"/api/v1/metadata/{id}",
       {{"get", op("Record by id, counting a view", "metadata-record", {200, 400, 404, 503},
                   json::array({path_param("id")}))}}},
      {"/api/v1/search",
       {{"get", op("Full-text, facet and filter search", "search-results", {200, 400, 503},
                   std::move(search_params))}}},
      {"/api/v1/sources",
       {{"get", op("Registered sources", "source-list", {200, 503})},
        {"post", op("Register a source", "source", {201, 400, 401, 409, 415, 422, 503},
                    json::array(), "source-config")}}},
      {"/api/v1/sources/{ref}",
       {{"get", op("Source by name or id", "source", {200, 404, 503},
                   json::array({path_param("ref")}))}}},
      {"/api/v1/ingest",
       {{"get", op("Ingest jobs", "ingest-job-list", {200, 503})},
        {"post", op("Start an ingest job", "ingest-job", {202, 400, 401, 404, 409, 415, 422, 503},
                    json::array(), "ingest-request")}}},
      {"/api/v1/ingest/{jobId}",
       {{"get", op("Ingest job state", "ingest-job", {200, 404, 503},
                   json::array({path_param("jobId")}))}}},
      {"/api/v1/stats", {{"get", op("Store statistics", "stats", {200, 503})}}},
      {"/api/v1/schemas", {{"get", op("Served JSON Schemas", "schema-list", {200})}}},
      {"/api/v1/schemas/{name}",
       {{"get", document_op("JSON Schema document", {200, 404}, json::array({path_param("name")}))}}},
      {"/api/v1/openapi", {{"get", document_op("This document", {200})}}},
  };
  return {
      {"openapi", "3.1.0"},
      {"info",
       {{"title", "metalake API"},
        {"version", "1.0.0"},
        {"description", "JSON:API access to a metadata lake. Records, search, sources and ingest jobs."},
        {"license", {{"name", "Apache-2.0"}, {"identifier", "Apache-2.0"}}}}},
      {"servers", json::array({{{"url", std::string(origin)}}})},
      {"paths", std::move(paths)},
      {"components",
       {{"securitySchemes", {{"bearer", {{"type", "http"}, {"scheme", "bearer"}}}}}}},
  };
}

}  // namespace metalake
