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

#include <gtest/gtest.h>

#include <condition_variable>
#include <mutex>
#include <regex>
#include <thread>

#include "api_client.hpp"
#include "fixtures.hpp"
#include "metalake/record_json.hpp"
#include "metalake/schema_validator.hpp"
#include "simulators.hpp"

namespace metalake {
namespace {

using nlohmann::json;
using testing::TestLake;

::testing::AssertionResult conforms(const ApiResponse& r) {
  const auto problems = testing::conformance_problems(r);
  if (problems.empty()) {
    const std::string url = testing::body_json(r)["links"]["describedby"];
    if (!url.starts_with("http://lake.test/api/v1/schemas/")) return ::testing::AssertionFailure() << url;
    return ::testing::AssertionSuccess();
  }
  auto failure = ::testing::AssertionFailure();
  for (const auto& p : problems) failure << p << "\n";
  return failure << r.body;
}

RecordId add(Store& store, const std::string& orig, const std::string& title, int year = 2020) {
  auto record = testing::make_record("https://repo.example/oai", orig, title);
  record.descriptive.publication_year = year;
  record.descriptive.language = "en";
  record.descriptive.resource_type = ResourceType::kDataset;
  const RecordId id = record.processual.record_id;
  store.upsert_record(std::move(record));
  return id;
}

json source_body(const std::string& location, const std::string& protocol = "OAIPMH") {
  return {{"location", location},
          {"protocol", protocol},
          {"encoding", "XML"},
          {"format", "DublinCore"},
          {"dataSteward", "steward@example.org"}};
}

json wait_for_job(const TestLake& lake, const std::string& id) {
  for (int i = 0; i < 500; ++i) {
    const auto r = lake.get("/api/v1/ingest/" + id);
    EXPECT_TRUE(conforms(r));
    const json body = testing::body_json(r);
    const std::string state = body["data"]["attributes"]["state"];
    if (state == "done" || state == "failed") return body;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ADD_FAILURE() << "job " << id << " did not finish";
  return {};
}

TEST(Api, Ready) {
  TestLake lake;
  const auto r = lake.get("/api/v1/ready");
  EXPECT_EQ(r.status, 200);
  EXPECT_TRUE(conforms(r));
  EXPECT_EQ(testing::body_json(r)["data"]["attributes"]["status"], "ok");
}

TEST(Api, DetachedApiIsUnavailableButServesSchemas) {
  Api api;
  EXPECT_FALSE(api.ready());
  for (const char* target : {"/api/v1/ready", "/api/v1/stats", "/api/v1/search?q=x", "/api/v1/metadata/AAAAAAAAAAA"}) {
    const auto r = api.handle(testing::make_request("GET", target));
    EXPECT_EQ(r.status, 503) << target;
    EXPECT_TRUE(conforms(r));
  }
  EXPECT_EQ(api.handle(testing::make_request("GET", "/api/v1/schemas")).status, 200);
  EXPECT_EQ(api.handle(testing::make_request("GET", "/api/v1/openapi")).status, 200);
  EXPECT_EQ(api.handle(testing::make_request("GET", "/api/v1/nothing")).status, 404);
}

TEST(Api, RecordWithRelationshipsAndViews) {
  TestLake lake;
  const auto a = add(*lake.store, "a", "Chapter");
  const auto b = add(*lake.store, "b", "Book");
  lake.store->add_edge({a, RelationLabel::kIsPartOf, b});
  const auto stored = lake.store->get_record(a, false);

  const auto r = lake.get("/api/v1/metadata/" + a.str());
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(conforms(r));
  const json body = testing::body_json(r);
  EXPECT_EQ(body["data"]["type"], "metadata");
  EXPECT_EQ(body["data"]["id"], a.str());
  EXPECT_EQ(body["data"]["attributes"], to_json(*stored));
  EXPECT_EQ(record_from_json(body["data"]["attributes"]).processual.record_id, a);
  EXPECT_EQ(body["data"]["links"]["self"], "http://lake.test/api/v1/metadata/" + a.str());
  const json rel = body["data"]["relationships"]["IsPartOf"]["data"];
  ASSERT_EQ(rel.size(), 1u);
  EXPECT_EQ(rel[0]["id"], b.str());
  EXPECT_EQ(rel[0]["meta"]["direction"], "out");

  const json back = testing::body_json(lake.get("/api/v1/metadata/" + b.str()));
  EXPECT_EQ(back["data"]["relationships"]["IsPartOf"]["data"][0]["meta"]["direction"], "in");

  EXPECT_EQ(lake.store->get_record(a, false)->social.view_count, 1u);
  const json again = testing::body_json(lake.get("/api/v1/metadata/" + a.str()));
  EXPECT_EQ(again["data"]["attributes"]["social"]["viewCount"], 1);
  EXPECT_EQ(lake.store->get_record(a, false)->social.view_count, 2u);
}

TEST(Api, RecordErrors) {
  TestLake lake;
  auto r = lake.get("/api/v1/metadata/short");
  EXPECT_EQ(r.status, 400);
  EXPECT_TRUE(conforms(r));
  EXPECT_EQ(testing::body_json(r)["errors"][0]["source"]["parameter"], "id");
  r = lake.get("/api/v1/metadata/AAAAAAAAAAA");
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(conforms(r));
}

TEST(Api, ViewCountingCanBeDisabled) {
  ApiOptions options;
  options.count_views = false;
  TestLake lake(std::nullopt, options);
  const auto a = add(*lake.store, "a", "Chapter");
  lake.get("/api/v1/metadata/" + a.str());
  EXPECT_EQ(lake.store->get_record(a, false)->social.view_count, 0u);
}

TEST(Api, SearchModes) {
  TestLake lake;
  for (int i = 0; i < 30; ++i) add(*lake.store, "r" + std::to_string(i), i % 3 ? "Lake sediment " + std::to_string(i) : "River", 2000 + i % 5);

  auto r = lake.get("/api/v1/search?q=sediment");
  ASSERT_EQ(r.status, 200);
  EXPECT_TRUE(conforms(r));
  json body = testing::body_json(r);
  EXPECT_EQ(body["meta"]["total"], 20);
  EXPECT_EQ(body["data"].size(), 20u);
  EXPECT_TRUE(body["data"][0]["meta"].contains("score"));
  EXPECT_EQ(body["meta"]["facetCounts"].size(), kAllFacetFields.size());

  r = lake.get("/api/v1/search?filter[publicationYear]=2003");
  EXPECT_TRUE(conforms(r));
  body = testing::body_json(r);
  EXPECT_EQ(body["meta"]["total"], 6);
  EXPECT_EQ(body["meta"]["facetCounts"]["publicationYear"], json({{"2003", 6}}));
  EXPECT_FALSE(body["data"][0].contains("meta"));

  r = lake.get("/api/v1/search?query=descriptive.publicationYear+%3E%3D+2003+AND+descriptive.title+%3D+%22River%22");
  EXPECT_TRUE(conforms(r));
  body = testing::body_json(r);
  std::size_t expected = 0;
  for (int i = 0; i < 30; ++i) expected += (i % 3 == 0 && 2000 + i % 5 >= 2003) ? 1 : 0;
  EXPECT_EQ(body["meta"]["total"], expected);

  r = lake.get("/api/v1/search?q=sediment&filter[publicationYear]=2001&page[size]=2");
  EXPECT_TRUE(conforms(r));
  body = testing::body_json(r);
  EXPECT_EQ(body["meta"]["total"], 4);
  EXPECT_EQ(body["meta"]["page"]["totalPages"], 2);
  EXPECT_EQ(body["data"].size(), 2u);
}

TEST(Api, SearchPaginationLinks) {
  TestLake lake;
  for (int i = 0; i < 45; ++i) add(*lake.store, "r" + std::to_string(i), "Record " + std::to_string(i));
  const json body = testing::body_json(lake.get("/api/v1/search?filter[language]=en&page[number]=2"));
  EXPECT_EQ(body["meta"]["page"], json({{"number", 2}, {"size", 20}, {"totalPages", 3}}));
  const auto& links = body["links"];
  EXPECT_NE(links["next"].get<std::string>().find("page%5Bnumber%5D=3"), std::string::npos);
  EXPECT_NE(links["prev"].get<std::string>().find("page%5Bnumber%5D=1"), std::string::npos);
  EXPECT_NE(links["last"].get<std::string>().find("page%5Bnumber%5D=3"), std::string::npos);
  EXPECT_NE(links["first"].get<std::string>().find("filter%5Blanguage%5D=en"), std::string::npos);

  std::set<std::string> ids;
  std::optional<std::string> next = "/api/v1/search?filter[language]=en&page[size]=7";
  int pages = 0;
  while (next) {
    const json page = testing::body_json(lake.get(*next));
    for (const auto& item : page["data"]) EXPECT_TRUE(ids.insert(item["id"].get<std::string>()).second);
    next.reset();
    if (page["links"].contains("next")) next = page["links"]["next"].get<std::string>().substr(std::string("http://lake.test").size());
    ++pages;
  }
  EXPECT_EQ(pages, 7);
  EXPECT_EQ(ids.size(), 45u);

  const json beyond = testing::body_json(lake.get("/api/v1/search?filter[language]=en&page[number]=9"));
  EXPECT_TRUE(beyond["data"].empty());
  EXPECT_EQ(beyond["meta"]["total"], 45);
}

TEST(Api, SearchParameterErrors) {
  TestLake lake;
  add(*lake.store, "a", "Alpha");
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"/api/v1/search", "q"},
      {"/api/v1/search?q=%20%20", ""},
      {"/api/v1/search?q=a&query=descriptive.title+%3D+%22a%22", "query"},
      {"/api/v1/search?filter[colour]=red", "filter[colour]"},
      {"/api/v1/search?q=a&page[size]=101", "page[size]"},
      {"/api/v1/search?q=a&page[size]=0", "page[size]"},
      {"/api/v1/search?q=a&page[number]=0", "page[number]"},
      {"/api/v1/search?q=a&page[number]=x", "page[number]"},
      {"/api/v1/search?q=a&q=b", "q"},
      {"/api/v1/search?query=descriptive.nothing+%3D+1", "query"},
  };
  for (const auto& [target, parameter] : cases) {
    const auto r = lake.get(target);
    EXPECT_EQ(r.status, 400) << target;
    EXPECT_TRUE(conforms(r)) << target;
    if (!parameter.empty()) {
      EXPECT_EQ(testing::body_json(r)["errors"][0]["source"]["parameter"], parameter) << target;
    }
  }
  const auto r = lake.get("/api/v1/search?query=descriptive.title+%3D%3D+%22x%22");
  EXPECT_EQ(r.status, 400);
  EXPECT_TRUE(conforms(r));
  const json error = testing::body_json(r)["errors"][0];
  EXPECT_EQ(error["code"], "parse-error");
  EXPECT_EQ(error["meta"]["offset"], 19);
}

TEST(Api, SourcesLifecycle) {
  testing::TempDir dir;
  TestLake lake(dir.path());
  auto r = lake.post("/api/v1/sources", source_body("https://repo.example/oai"));
  ASSERT_EQ(r.status, 201) << r.body;
  EXPECT_TRUE(conforms(r));
  const json created = testing::body_json(r)["data"];
  const std::string name = created["id"];
  EXPECT_EQ(created["attributes"]["sourceId"], name);
  EXPECT_EQ(created["attributes"]["oaiMetadataPrefix"], "oai_dc");
  EXPECT_EQ(r.headers.at("Location"), "http://lake.test/api/v1/sources/" + name);

  r = lake.get("/api/v1/sources");
  EXPECT_TRUE(conforms(r));
  EXPECT_EQ(testing::body_json(r)["data"].size(), 1u);
  r = lake.get("/api/v1/sources/" + name);
  EXPECT_EQ(r.status, 200);
  EXPECT_TRUE(conforms(r));
  r = lake.get("/api/v1/sources/unknown");
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(conforms(r));

  r = lake.post("/api/v1/sources", source_body("https://repo.example/oai"));
  EXPECT_EQ(r.status, 409);
  EXPECT_TRUE(conforms(r));
}

TEST(Api, SourceSecretsAreNotServed) {
  TestLake lake;
  json body = source_body("https://s3.example/bucket", "S3");
  body["credentials"] = {{"username", "AKID"}, {"password", "top-secret"}};
  const auto r = lake.post("/api/v1/sources", body);
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body.find("top-secret"), std::string::npos);
  EXPECT_EQ(lake.get("/api/v1/sources").body.find("top-secret"), std::string::npos);
}

TEST(Api, SourceValidationErrors) {
  TestLake lake;
  json body = source_body("not a url");
  body["protocol"] = "FTP";
  body.erase("dataSteward");
  const auto r = lake.post("/api/v1/sources", body);
  EXPECT_EQ(r.status, 422);
  EXPECT_TRUE(conforms(r));
  std::set<std::string> pointers;
  const json errors = testing::body_json(r)["errors"];
  for (const auto& e : errors) pointers.insert(e["source"]["pointer"].get<std::string>());
  EXPECT_EQ(pointers, (std::set<std::string>{"/location", "/protocol", "/dataSteward"}));

  auto raw = lake.api->handle(testing::make_request("POST", "/api/v1/sources", "{broken"));
  EXPECT_EQ(raw.status, 400);
  EXPECT_TRUE(conforms(raw));
  raw = lake.api->handle(testing::make_request("POST", "/api/v1/sources", source_body("https://x.example/").dump(),
                                               {{"content-type", "text/xml"}}));
  EXPECT_EQ(raw.status, 415);
  EXPECT_TRUE(conforms(raw));
  raw = lake.api->handle(testing::make_request("POST", "/api/v1/sources", source_body("https://x.example/").dump(),
                                               {{"content-type", "application/vnd.api+json; charset=utf-8"}}));
  EXPECT_EQ(raw.status, 201);
}

TEST(Api, CommandTokenGuardsPosts) {
  ApiOptions options;
  options.command_token = "s3cret";
  TestLake lake(std::nullopt, options);
  auto r = lake.post("/api/v1/sources", source_body("https://repo.example/oai"));
  EXPECT_EQ(r.status, 401);
  EXPECT_TRUE(conforms(r));
  EXPECT_EQ(r.headers.at("WWW-Authenticate"), "Bearer");
  r = lake.post("/api/v1/sources", source_body("https://repo.example/oai"), {{"authorization", "Bearer wrong"}});
  EXPECT_EQ(r.status, 401);
  r = lake.post("/api/v1/ingest", {{"sourceRef", "x"}});
  EXPECT_EQ(r.status, 401);
  r = lake.post("/api/v1/sources", source_body("https://repo.example/oai"), {{"authorization", "Bearer s3cret"}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(lake.get("/api/v1/sources").status, 200);
}

TEST(Api, IngestThroughTheApi) {
  testing::OaiPmhSimulator sim(testing::numbered_oai_records(12, SourceFormat::kDublinCore), 5);
  TestLake lake;
  const std::string name =
      testing::body_json(lake.post("/api/v1/sources", source_body(sim.location())))["data"]["id"];
  auto r = lake.post("/api/v1/ingest", {{"sourceRef", name}});
  ASSERT_EQ(r.status, 202) << r.body;
  EXPECT_TRUE(conforms(r));
  const std::string job = testing::body_json(r)["data"]["id"];
  EXPECT_EQ(r.headers.at("Location"), "http://lake.test/api/v1/ingest/" + job);

  const json done = wait_for_job(lake, job);
  const json& attrs = done["data"]["attributes"];
  EXPECT_EQ(attrs["state"], "done");
  EXPECT_EQ(attrs["counts"], json({{"seen", 12}, {"loaded", 12}, {"skipped", 0}, {"failed", 0}}));
  EXPECT_EQ(attrs["history"].back(), "done");
  EXPECT_EQ(attrs["sourceId"], name);

  r = lake.get("/api/v1/ingest");
  EXPECT_TRUE(conforms(r));
  EXPECT_EQ(testing::body_json(r)["data"].size(), 1u);

  r = lake.get("/api/v1/stats");
  EXPECT_TRUE(conforms(r));
  const json stats = testing::body_json(r)["data"]["attributes"];
  EXPECT_EQ(stats["recordCount"], 12);
  EXPECT_EQ(stats["perFormat"]["DublinCore"], 12);
  EXPECT_EQ(stats["perSource"][sim.location()], 12);

  const json source = testing::body_json(lake.get("/api/v1/sources/" + name))["data"]["attributes"];
  EXPECT_TRUE(source.contains("lastSuccessStart"));

  const auto id = compute_record_id(sim.location(), "oai:sim:7");
  const json record = testing::body_json(lake.get("/api/v1/metadata/" + id.str()));
  EXPECT_EQ(record["data"]["attributes"]["raw"]["payload"], sim.served_payload("oai:sim:7"));

  r = lake.post("/api/v1/ingest", {{"sourceRef", name}, {"since", "2024-03-02"}});
  ASSERT_EQ(r.status, 202);
  const json second = wait_for_job(lake, testing::body_json(r)["data"]["id"]);
  EXPECT_EQ(second["data"]["attributes"]["since"], "2024-03-02");
  EXPECT_EQ(second["data"]["attributes"]["counts"]["seen"], 0);
}

TEST(Api, IngestRequestErrors) {
  TestLake lake;
  lake.post("/api/v1/sources", source_body("https://repo.example/oai"));
  auto r = lake.post("/api/v1/ingest", {{"sourceRef", "missing"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(conforms(r));
  for (const json& body : {json::object(), json({{"sourceRef", 5}}), json({{"sourceRef", "x"}, {"since", "soon"}}),
                           json({{"sourceRef", "x"}, {"extra", true}}), json::array()}) {
    r = lake.post("/api/v1/ingest", body);
    EXPECT_EQ(r.status, 422) << body.dump();
    EXPECT_TRUE(conforms(r));
  }
  r = lake.get("/api/v1/ingest/nope");
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(conforms(r));
}

TEST(Api, ConcurrentIngestOfOneSourceConflicts) {
  testing::OaiPmhSimulator sim(testing::numbered_oai_records(3, SourceFormat::kDublinCore), 10);
  std::mutex mutex;
  std::condition_variable cv;
  bool waiting = false;
  bool release = false;
  PipelineOptions options;
  options.on_progress = [&](const IngestJob& j) {
    if (j.state != JobState::kLoading || j.counts.loaded != 0) return;
    std::unique_lock lock(mutex);
    waiting = true;
    cv.notify_all();
    cv.wait(lock, [&] { return release; });
  };
  auto store = Store::in_memory();
  IngestService ingest(*store, make_http_client(testing::fast_retries()), std::nullopt, options);
  ingest.add_source("sim", testing::make_source(sim.location(), Protocol::kOAIPMH, SourceFormat::kDublinCore));
  Api api;
  api.attach(*store, ingest);
  auto post = [&] {
    return api.handle(testing::make_request("POST", "/api/v1/ingest", json({{"sourceRef", "sim"}}).dump()));
  };
  EXPECT_EQ(post().status, 202);
  {
    std::unique_lock lock(mutex);
    cv.wait(lock, [&] { return waiting; });
  }
  const auto r = post();
  EXPECT_EQ(r.status, 409);
  EXPECT_TRUE(conforms(r));
  {
    std::lock_guard lock(mutex);
    release = true;
  }
  cv.notify_all();
  ingest.wait_idle();
  api.detach();
}

TEST(Api, MethodsRoutesAndCors) {
  TestLake lake;
  auto r = lake.api->handle(testing::make_request("DELETE", "/api/v1/metadata/AAAAAAAAAAA"));
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(r.headers.at("Allow"), "GET");
  EXPECT_TRUE(conforms(r));
  r = lake.api->handle(testing::make_request("PUT", "/api/v1/sources", "{}"));
  EXPECT_EQ(r.status, 405);
  EXPECT_EQ(r.headers.at("Allow"), "GET, POST");
  r = lake.post("/api/v1/stats", json::object());
  EXPECT_EQ(r.status, 405);
  for (const char* target : {"/api/v1/unknown", "/api/v2/ready", "/api/v1x", "/", "/api/v1/metadata/a/b"}) {
    r = lake.get(target);
    EXPECT_EQ(r.status, 404) << target;
    EXPECT_TRUE(conforms(r)) << target;
  }
  r = lake.api->handle(testing::make_request("OPTIONS", "/api/v1/search"));
  EXPECT_EQ(r.status, 204);
  EXPECT_EQ(r.headers.at("Access-Control-Allow-Origin"), "*");
  EXPECT_NE(r.headers.at("Access-Control-Allow-Methods").find("POST"), std::string::npos);
  EXPECT_EQ(lake.get("/api/v1/ready").headers.at("Access-Control-Allow-Origin"), "*");
  EXPECT_EQ(lake.get("/api/v1/ready/").status, 200);
}

TEST(Api, SchemasAreServedAndSelfConsistent) {
  TestLake lake;
  auto r = lake.get("/api/v1/schemas");
  EXPECT_TRUE(conforms(r));
  const json list = testing::body_json(r)["data"];
  EXPECT_EQ(list.size(), api_schema_names().size());
  for (const auto& name : api_schema_names()) {
    r = lake.get("/api/v1/schemas/" + name);
    ASSERT_EQ(r.status, 200) << name;
    EXPECT_EQ(r.content_type, "application/json");
    const json schema = json::parse(r.body);
    EXPECT_EQ(schema["$id"], "http://lake.test/api/v1/schemas/" + name);
    EXPECT_EQ(schema["$schema"], "https://json-schema.org/draft/2020-12/schema");
  }
  r = lake.get("/api/v1/schemas/nothing");
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(conforms(r));
}

TEST(Api, RequestSchemasAcceptTheDocumentedBodies) {
  EXPECT_TRUE(validate_json(*api_schema("source-config"), source_body("https://repo.example/oai")).empty());
  EXPECT_FALSE(validate_json(*api_schema("source-config"), json({{"location", 1}})).empty());
  EXPECT_TRUE(validate_json(*api_schema("ingest-request"), json({{"sourceRef", "x"}, {"since", "2024-01-01"}})).empty());
  EXPECT_FALSE(validate_json(*api_schema("ingest-request"), json::object()).empty());
}

TEST(Api, OpenApiDescribesEveryRoute) {
  TestLake lake;
  const auto r = lake.get("/api/v1/openapi");
  ASSERT_EQ(r.status, 200);
  const json doc = json::parse(r.body);
  EXPECT_EQ(doc["openapi"], "3.1.0");
  EXPECT_EQ(doc["servers"][0]["url"], "http://lake.test");
  const std::vector<std::pair<std::string, std::string>> routes = {
      {"get", "/api/v1/ready"},          {"get", "/api/v1/metadata/{id}"}, {"get", "/api/v1/search"},
      {"get", "/api/v1/sources"},        {"post", "/api/v1/sources"},      {"get", "/api/v1/sources/{ref}"},
      {"get", "/api/v1/ingest"},         {"post", "/api/v1/ingest"},       {"get", "/api/v1/ingest/{jobId}"},
      {"get", "/api/v1/stats"},          {"get", "/api/v1/schemas"},       {"get", "/api/v1/schemas/{name}"},
      {"get", "/api/v1/openapi"}};
  std::size_t operations = 0;
  for (const auto& [path, item] : doc["paths"].items()) operations += item.size();
  EXPECT_EQ(operations, routes.size());
  for (const auto& [method, path] : routes) {
    ASSERT_TRUE(doc["paths"].contains(path)) << path;
    ASSERT_TRUE(doc["paths"][path].contains(method)) << method << " " << path;
  }
  const std::regex ref("\"\\$ref\":\"/api/v1/schemas/([a-z-]+)\"");
  const std::string text = doc.dump();
  const auto names = api_schema_names();
  std::size_t refs = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ref); it != std::sregex_iterator(); ++it) {
    EXPECT_NE(std::find(names.begin(), names.end(), (*it)[1].str()), names.end()) << (*it)[1];
    ++refs;
  }
  EXPECT_GT(refs, routes.size());
}

TEST(ApiServer, ServesOverHttp) {
  TestLake lake;
  add(*lake.store, "a", "Served record");
  ApiServer server(*lake.api);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen(); });
  const std::string origin = "http://127.0.0.1:" + std::to_string(port);
  auto r = testing::http_get(origin, "/api/v1/ready");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, kJsonApiMediaType);
  r = testing::http_get(origin, "/api/v1/search?q=served");
  EXPECT_EQ(r.status, 200);
  const json body = json::parse(r.body);
  EXPECT_EQ(body["meta"]["total"], 1);
  EXPECT_EQ(body["links"]["describedby"], origin + "/api/v1/schemas/search-results");
  r = testing::http_post(origin, "/api/v1/sources", source_body("https://repo.example/oai").dump());
  EXPECT_EQ(r.status, 201);
  server.stop();
  loop.join();
}

TEST(ApiServer, BindFailureIsAnIoError) {
  TestLake lake;
  ApiServer first(*lake.api);
  const int port = first.bind("127.0.0.1", 0);
  ApiServer second(*lake.api);
  EXPECT_EQ(testing::error_code_of([&] { second.bind("127.0.0.1", port); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace metalake
