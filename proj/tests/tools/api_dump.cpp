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

// Prints every schema and a walk of API responses as one JSON document:
// {"schemas": {name: schema}, "responses": [{method, target, status, body}]}.

#include <iostream>

#include <nlohmann/json.hpp>

#include "api_client.hpp"
#include "fixtures.hpp"
#include "metalake/record_id.hpp"
#include "simulators.hpp"

using nlohmann::json;
using namespace metalake;

int main() {
  testing::OaiPmhSimulator oai({}, 4, "datacite");
  std::vector<testing::OaiRecord> records;
  for (int i = 0; i < 9; ++i) {
    testing::DocFields doc_fields;
    doc_fields.title = "Dump record " + std::to_string(i);
    doc_fields.creators = {"Example, Ada"};
    doc_fields.doi = "10.5555/dump." + std::to_string(i);
    doc_fields.year = 2010 + i;
    doc_fields.language = i % 2 ? "en" : "de";
    doc_fields.resource_type = "Dataset";
    doc_fields.subjects = {"dump"};
    if (i > 0) doc_fields.relations.emplace_back("IsPartOf", "10.5555/dump.0");
    records.push_back({"oai:dump:" + std::to_string(i), "2024-03-01", testing::datacite_doc(doc_fields), false, ""});
  }
  oai.set_records(records);

  ApiOptions options;
  options.command_token = "dump-token";
  testing::TestLake lake(std::nullopt, options);
  const std::map<std::string, std::string> auth = {{"authorization", "Bearer dump-token"}};

  json out = {{"schemas", json::object()}, {"responses", json::array()}};
  for (const auto& name : api_schema_names()) out["schemas"][name] = *api_schema(name);

  auto record = [&](const std::string& method, const std::string& target, const std::string& body = {},
                    std::map<std::string, std::string> headers = {}) {
    const ApiResponse r = lake.api->handle(testing::make_request(method, target, body, std::move(headers)));
    out["responses"].push_back(
        {{"method", method}, {"target", target}, {"status", r.status}, {"body", json::parse(r.body)}});
    return r;
  };

  const json source = {{"location", oai.location()},
                       {"protocol", "OAIPMH"},
                       {"encoding", "XML"},
                       {"format", "DataCite"},
                       {"dataSteward", "steward@example.org"}};
  const auto created = record("POST", "/api/v1/sources", source.dump(), auth);
  const std::string name = json::parse(created.body)["data"]["id"];
  record("POST", "/api/v1/sources", source.dump(), auth);
  record("POST", "/api/v1/sources", json{{"protocol", "FTP"}}.dump(), auth);
  record("POST", "/api/v1/sources", "{", auth);
  record("POST", "/api/v1/sources", source.dump());
  const auto started = record("POST", "/api/v1/ingest", json{{"sourceRef", name}}.dump(), auth);
  const std::string job = json::parse(started.body)["data"]["id"];
  lake.ingest->wait_idle();
  record("POST", "/api/v1/ingest", json{{"sourceRef", "missing"}}.dump(), auth);
  record("POST", "/api/v1/ingest", json{{"sourceRef", name}, {"since", "yesterday"}}.dump(), auth);

  const std::string id = compute_record_id(oai.location(), "oai:dump:3").str();
  const std::string root = compute_record_id(oai.location(), "oai:dump:0").str();
  for (const std::string& target : std::vector<std::string>{
           "/api/v1/ready", "/api/v1/metadata/" + id, "/api/v1/metadata/" + root, "/api/v1/metadata/AAAAAAAAAAA",
           "/api/v1/metadata/not-an-id", "/api/v1/search?q=dump+record", "/api/v1/search?q=dump&page[size]=2&page[number]=3",
           "/api/v1/search?filter[language]=en&filter[publicationYear]=2013",
           "/api/v1/search?query=descriptive.publicationYear+%3E%3D+2015+AND+NOT+descriptive.language+%3D+%22de%22",
           "/api/v1/search?query=descriptive.title+~", "/api/v1/search?filter[colour]=red", "/api/v1/search?page[size]=0",
           "/api/v1/sources", "/api/v1/sources/" + name, "/api/v1/sources/unknown", "/api/v1/ingest",
           "/api/v1/ingest/" + job, "/api/v1/ingest/unknown", "/api/v1/stats", "/api/v1/schemas",
           "/api/v1/schemas/record", "/api/v1/schemas/unknown", "/api/v1/nothing"}) {
    record("GET", target);
  }
  record("DELETE", "/api/v1/metadata/" + id);
  std::cout << out.dump(1) << '\n';
  return 0;
}
