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

#include "metalake/api.hpp"

#include <charconv>
#include <mutex>
#include <set>

#include "metalake/error.hpp"
#include "metalake/record_json.hpp"
#include "metalake/url.hpp"

namespace metalake {

using nlohmann::json;

struct Api::Context {
  Store* store = nullptr;
  IngestService* ingest = nullptr;
  std::string origin;
  std::string self;

  std::string url(std::string_view path) const { return origin + std::string(path); }
  std::string schema_url(std::string_view name) const {
    return origin + std::string(kApiPrefix) + "/schemas/" + std::string(name);
  }
  json links(std::string_view schema) const {
    return {{"self", self}, {"describedby", schema_url(schema)}};
  }
};

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string title;
  std::string detail;
  json source = nullptr;
  json meta = nullptr;
};

std::string api_path(std::string_view tail) { return std::string(kApiPrefix) + std::string(tail); }

ApiResponse respond(int status, const json& body) {
  ApiResponse r;
  r.status = status;
  r.body = body.dump();
  return r;
}

ApiResponse document_response(const json& body) {
  ApiResponse r;
  r.content_type = "application/json";
  r.body = body.dump(2);
  return r;
}

json error_object(const HttpError& e) {
  json j = {{"status", std::to_string(e.status)}, {"code", e.code}, {"title", e.title}};
  if (!e.detail.empty()) j["detail"] = e.detail;
  if (!e.source.is_null()) j["source"] = e.source;
  if (!e.meta.is_null()) j["meta"] = e.meta;
  return j;
}

const char* reason(int status) {
  switch (status) {
    case 400:
      return "Bad request";
    case 401:
      return "Unauthorized";
    case 404:
      return "Not found";
    case 405:
      return "Method not allowed";
    case 409:
      return "Conflict";
    case 415:
      return "Unsupported media type";
    case 422:
      return "Unprocessable content";
    case 503:
      return "Service unavailable";
    default:
      return "Internal server error";
  }
}

HttpError from_error(const Error& e) {
  int status = 500;
  switch (e.code()) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kParse:
    case ErrorCode::kFormatMismatch:
      status = 400;
      break;
    case ErrorCode::kNotFound:
      status = 404;
      break;
    case ErrorCode::kConflict:
      status = 409;
      break;
    case ErrorCode::kValidation:
      status = 422;
      break;
    default:
      break;
  }
  return {status, std::string(to_string(e.code())), reason(status), e.what()};
}

ApiResponse error_response(const Api::Context& ctx, const std::vector<HttpError>& errors) {
  json list = json::array();
  for (const auto& e : errors) list.push_back(error_object(e));
  return respond(errors.front().status, {{"errors", std::move(list)}, {"links", ctx.links("error")}});
}

ApiResponse error_response(const Api::Context& ctx, HttpError e) {
  return error_response(ctx, std::vector<HttpError>{std::move(e)});
}

std::string header(const ApiRequest& request, const std::string& name) {
  auto it = request.headers.find(name);
  return it == request.headers.end() ? std::string{} : it->second;
}

std::optional<std::size_t> parse_count(std::string_view text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

json source_resource(const Api::Context& ctx, const RegisteredSource& source) {
  json attributes = to_json(source.config, false);
  attributes["name"] = source.name;
  attributes["sourceId"] = source.id;
  if (source.last_success_start) {
    attributes["lastSuccessStart"] = format_timestamp(*source.last_success_start);
  }
  return {{"type", "source"},
          {"id", source.name},
          {"attributes", std::move(attributes)},
          {"links", {{"self", ctx.url(api_path("/sources/") + percent_encode(source.name))}}}};
}

json job_resource(const Api::Context& ctx, const IngestJob& job) {
  json history = json::array();
  for (auto s : job.history) history.push_back(std::string(to_string(s)));
  json errors = json::array();
  for (const auto& e : job.errors) {
    errors.push_back({{"originalIdentifier", e.original_identifier}, {"message", e.message}});
  }
  json attributes = {{"source", job.source_name},
                     {"sourceId", source_id(job.source)},
                     {"state", std::string(to_string(job.state))},
                     {"history", std::move(history)},
                     {"counts",
                      {{"seen", job.counts.seen},
                       {"loaded", job.counts.loaded},
                       {"skipped", job.counts.skipped},
                       {"failed", job.counts.failed}}},
                     {"errors", std::move(errors)},
                     {"edgesCreated", job.edges_created}};
  if (job.since) attributes["since"] = *job.since;
  if (job.started_at) attributes["startedAt"] = format_timestamp(*job.started_at);
  if (job.finished_at) attributes["finishedAt"] = format_timestamp(*job.finished_at);
  if (job.failure) attributes["failure"] = *job.failure;
  if (job.resumption_cursor) attributes["resumptionCursor"] = *job.resumption_cursor;
  return {{"type", "ingest-job"},
          {"id", job.job_id},
          {"attributes", std::move(attributes)},
          {"links", {{"self", ctx.url(api_path("/ingest/") + job.job_id)}}}};
}

std::optional<HttpError> check_json_body(const ApiRequest& request) {
  std::string type = header(request, "content-type");
  type = type.substr(0, type.find(';'));
  while (!type.empty() && type.back() == ' ') type.pop_back();
  if (type != "application/json" && type != kJsonApiMediaType) {
    return HttpError{415, "unsupported-media-type", reason(415),
                     "request bodies must be application/json or application/vnd.api+json"};
  }
  return std::nullopt;
}

json parse_body(const ApiRequest& request) {
  try {
    return json::parse(request.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed JSON body: ") + e.what());
  }
}

std::string pointer_for(const std::string& field) {
  std::string out = "/";
  for (char c : field) out.push_back(c == '.' ? '/' : c);
  return out;
}

}  // namespace

Api::Api(ApiOptions options) : options_(std::move(options)) {}

void Api::attach(Store& store, IngestService& ingest) {
  std::unique_lock lock(mutex_);
  store_ = &store;
  ingest_ = &ingest;
}

void Api::detach() {
  std::unique_lock lock(mutex_);
  store_ = nullptr;
  ingest_ = nullptr;
}

bool Api::ready() const {
  std::shared_lock lock(mutex_);
  return store_ != nullptr;
}

ApiResponse Api::handle(const ApiRequest& request) const {
  Context ctx;
  const std::string host = header(request, "host");
  ctx.origin = host.empty() ? options_.fallback_origin : "http://" + host;
  ctx.self = ctx.origin + request.path;
  if (!request.query.empty()) ctx.self += "?" + build_query(request.query);

  ApiResponse response;
  if (request.method == "OPTIONS") {
    response.status = 204;
    response.content_type.clear();
    response.headers["Access-Control-Allow-Origin"] = "*";
    response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
    response.headers["Access-Control-Allow-Headers"] = "Content-Type, Authorization";
    return response;
  }

  std::shared_lock lock(mutex_);
  ctx.store = store_;
  ctx.ingest = ingest_;
  try {
    response = dispatch(request, ctx);
  } catch (const Error& e) {
    response = error_response(ctx, from_error(e));
  } catch (const std::exception& e) {
    response = error_response(ctx, HttpError{500, "internal", reason(500), e.what()});
  }
  if (request.method == "GET") response.headers["Access-Control-Allow-Origin"] = "*";
  return response;
}

ApiResponse Api::dispatch(const ApiRequest& request, const Context& ctx) const {
  std::string_view path = request.path;
  const std::string_view prefix = kApiPrefix;
  if (path.substr(0, prefix.size()) != prefix ||
      (path.size() > prefix.size() && path[prefix.size()] != '/')) {
    return error_response(ctx, {404, "not-found", reason(404), "no route " + request.path});
  }
  path.remove_prefix(prefix.size());
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    path.remove_prefix(1);
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
  }
  if (!parts.empty() && parts.back().empty()) parts.pop_back();

  const bool get = request.method == "GET" || request.method == "HEAD";
  const bool post = request.method == "POST";
  auto not_allowed = [&](const char* allow) {
    ApiResponse r = error_response(ctx, {405, "method-not-allowed", reason(405),
                                         request.method + " is not supported here"});
    r.headers["Allow"] = allow;
    return r;
  };
  auto route = [&](std::initializer_list<std::string_view> shape) {
    if (parts.size() != shape.size()) return false;
    std::size_t i = 0;
    for (auto s : shape) {
      if (s != "*" && parts[i] != s) return false;
      ++i;
    }
    return true;
  };

  if (route({"schemas"})) return get ? get_schemas(ctx) : not_allowed("GET");
  if (route({"schemas", "*"})) return get ? get_schema(ctx, parts[1]) : not_allowed("GET");
  if (route({"openapi"})) return get ? get_openapi(ctx) : not_allowed("GET");

  const bool known =
      route({"ready"}) || route({"metadata", "*"}) || route({"search"}) || route({"sources"}) ||
      route({"sources", "*"}) || route({"ingest"}) || route({"ingest", "*"}) || route({"stats"});
  if (!known) return error_response(ctx, {404, "not-found", reason(404), "no route " + request.path});
  if (ctx.store == nullptr) {
    return error_response(ctx, {503, "unavailable", reason(503), "the store is not open"});
  }

  if (route({"ready"})) return get ? get_ready(ctx) : not_allowed("GET");
  if (route({"metadata", "*"})) return get ? get_record(ctx, parts[1]) : not_allowed("GET");
  if (route({"search"})) return get ? get_search(ctx, request) : not_allowed("GET");
  if (route({"sources", "*"})) return get ? get_source(ctx, parts[1]) : not_allowed("GET");
  if (route({"ingest", "*"})) return get ? get_job(ctx, parts[1]) : not_allowed("GET");
  if (route({"stats"})) return get ? get_stats(ctx) : not_allowed("GET");

  const bool sources = route({"sources"});
  if (!get && !post) return not_allowed("GET, POST");
  if (get) return sources ? get_sources(ctx) : get_jobs(ctx);

  if (options_.command_token &&
      header(request, "authorization") != "Bearer " + *options_.command_token) {
    ApiResponse r = error_response(ctx, {401, "unauthorized", reason(401),
                                         "a valid bearer token is required"});
    r.headers["WWW-Authenticate"] = "Bearer";
    return r;
  }
  if (auto e = check_json_body(request)) return error_response(ctx, *e);
  return sources ? post_source(ctx, request) : post_ingest(ctx, request);
}

ApiResponse Api::get_ready(const Context& ctx) const {
  return respond(200, {{"data", {{"type", "status"},
                                 {"id", "ready"},
                                 {"attributes", {{"status", "ok"}}},
                                 {"links", {{"self", ctx.url(api_path("/ready"))}}}}},
                       {"links", ctx.links("status")}});
}

ApiResponse Api::get_record(const Context& ctx, std::string_view id_text) const {
  const auto id = RecordId::parse(id_text);
  if (!id) {
    return error_response(ctx, {400, "invalid-input", reason(400),
                                "record ids are 11 base64url characters",
                                {{"parameter", "id"}}});
  }
  auto record = ctx.store->get_record(*id, options_.count_views);
  if (!record) {
    return error_response(ctx, {404, "not-found", reason(404), "no record " + id->str()});
  }
  json relationships = json::object();
  for (const auto& n : ctx.store->neighbors(*id, Direction::kBoth)) {
    const bool out = n.edge.from == *id;
    relationships[std::string(to_string(n.edge.label))]["data"].push_back(
        {{"type", "metadata"},
         {"id", (out ? n.edge.to : n.edge.from).str()},
         {"meta", {{"direction", out ? "out" : "in"}}}});
  }
  return respond(200, {{"data",
                        {{"type", "metadata"},
                         {"id", id->str()},
                         {"attributes", to_json(*record)},
                         {"relationships", std::move(relationships)},
                         {"links", {{"self", ctx.url(api_path("/metadata/") + id->str())}}}}},
                       {"links", ctx.links("metadata-record")}});
}

ApiResponse Api::get_search(const Context& ctx, const ApiRequest& request) const {
  SearchRequest search;
  std::optional<std::string> query;
  std::vector<HttpError> errors;
  auto bad = [&](const std::string& parameter, const std::string& detail) {
    errors.push_back({400, "invalid-input", reason(400), detail, {{"parameter", parameter}}});
  };
  std::set<std::string> seen;
  for (const auto& [key, value] : request.query) {
    if (!seen.insert(key).second) {
      bad(key, "parameter given more than once");
      continue;
    }
    if (key == "q") {
      search.text = value;
    } else if (key == "query") {
      query = value;
    } else if (key.starts_with("filter[") && key.ends_with("]")) {
      const std::string name = key.substr(7, key.size() - 8);
      if (auto field = parse_facet_field(name)) {
        search.filters[*field] = value;
      } else {
        bad(key, "unknown facet '" + name + "'");
      }
    } else if (key == "page[number]" || key == "page[size]") {
      const auto n = parse_count(value);
      if (!n || *n < 1 || (key == "page[size]" && *n > kMaxPageSize)) {
        bad(key, key == "page[size]" ? "page size must be an integer in [1, 100]"
                                     : "page number must be a positive integer");
      } else if (key == "page[number]") {
        search.page.number = *n;
      } else {
        search.page.size = *n;
      }
    } else if (key.starts_with("filter") || key.starts_with("page")) {
      bad(key, "unsupported parameter");
    }
  }
  if (errors.empty() && !search.text && !query && search.filters.empty()) {
    bad("q", "give at least one of q, query or filter[...]");
  }
  if (search.text && query) bad("query", "q and query are mutually exclusive");
  if (!errors.empty()) return error_response(ctx, errors);

  if (query) {
    try {
      search.expr = FilterExpr::parse(*query);
    } catch (const ParseError& e) {
      return error_response(ctx, {400, "parse-error", reason(400), e.what(), {{"parameter", "query"}},
                                  {{"offset", e.offset()}, {"column", e.column()}}});
    } catch (const Error& e) {
      return error_response(ctx, {400, "invalid-input", reason(400), e.what(), {{"parameter", "query"}}});
    }
  }

  const SearchResult result = ctx.store->search(search);
  json data = json::array();
  for (const auto& hit : result.hits) {
    auto record = ctx.store->get_record(hit.id, false);
    if (!record) continue;
    const auto& d = record->descriptive;
    json creators = json::array();
    for (const auto& c : d.creators) {
      json cj = {{"name", c.name}};
      if (c.identifier) cj["identifier"] = *c.identifier;
      creators.push_back(std::move(cj));
    }
    json attributes = {{"title", d.title},
                       {"creators", std::move(creators)},
                       {"source", record->processual.source}};
    if (d.publication_year) attributes["publicationYear"] = *d.publication_year;
    if (d.resource_type) attributes["resourceType"] = to_string(*d.resource_type);
    json item = {{"type", "metadata"},
                 {"id", hit.id.str()},
                 {"attributes", std::move(attributes)},
                 {"links", {{"self", ctx.url(api_path("/metadata/") + hit.id.str())}}}};
    if (search.text) item["meta"] = {{"score", hit.score}};
    data.push_back(std::move(item));
  }

  json facets = json::object();
  for (const auto& [field, counts] : result.facet_counts) {
    json values = json::object();
    for (const auto& [value, count] : counts) values[value] = count;
    facets[std::string(to_string(field))] = std::move(values);
  }
  const std::size_t size = search.page.size;
  const std::size_t total_pages = (result.total + size - 1) / size;
  auto page_link = [&](std::size_t number) {
    QueryParams params;
    for (const auto& [k, v] : request.query) {
      if (k != "page[number]" && k != "page[size]") params.emplace_back(k, v);
    }
    params.emplace_back("page[number]", std::to_string(number));
    params.emplace_back("page[size]", std::to_string(size));
    return ctx.url(api_path("/search?") + build_query(params));
  };
  json links = ctx.links("search-results");
  links["first"] = page_link(1);
  links["last"] = page_link(std::max<std::size_t>(1, total_pages));
  if (search.page.number > 1) {
    links["prev"] = page_link(std::min(search.page.number - 1, std::max<std::size_t>(1, total_pages)));
  }
  if (search.page.number < total_pages) links["next"] = page_link(search.page.number + 1);

  return respond(200, {{"data", std::move(data)},
                       {"meta",
                        {{"total", result.total},
                         {"page", {{"number", search.page.number},
                                   {"size", size},
                                   {"totalPages", total_pages}}},
                         {"facetCounts", std::move(facets)}}},
                       {"links", std::move(links)}});
}

ApiResponse Api::get_sources(const Context& ctx) const {
  json data = json::array();
  for (const auto& s : ctx.ingest->sources()) data.push_back(source_resource(ctx, s));
  return respond(200, {{"data", std::move(data)}, {"links", ctx.links("source-list")}});
}

ApiResponse Api::get_source(const Context& ctx, std::string_view ref) const {
  const std::string decoded = percent_decode(ref);
  auto source = ctx.ingest->find_source(decoded);
  if (!source) return error_response(ctx, {404, "not-found", reason(404), "no source " + decoded});
  return respond(200, {{"data", source_resource(ctx, *source)}, {"links", ctx.links("source")}});
}

ApiResponse Api::post_source(const Context& ctx, const ApiRequest& request) const {
  const json body = parse_body(request);
  ValidationReport violations;
  SourceConfig config = source_from_json(body, violations);
  if (!violations.empty()) {
    std::vector<HttpError> errors;
    for (const auto& v : violations) {
      errors.push_back({422, "validation-error", reason(422), v.field + ": " + v.problem,
                        {{"pointer", pointer_for(v.field)}}});
    }
    return error_response(ctx, errors);
  }
  const RegisteredSource source = ctx.ingest->register_source(std::move(config));
  ApiResponse r = respond(201, {{"data", source_resource(ctx, source)}, {"links", ctx.links("source")}});
  r.headers["Location"] = ctx.url(api_path("/sources/") + source.name);
  return r;
}

ApiResponse Api::post_ingest(const Context& ctx, const ApiRequest& request) const {
  const json body = parse_body(request);
  std::vector<HttpError> errors;
  auto invalid = [&](const std::string& field, const std::string& problem) {
    errors.push_back({422, "validation-error", reason(422), field + ": " + problem,
                      {{"pointer", "/" + field}}});
  };
  std::string ref;
  std::optional<std::string> since;
  if (!body.is_object()) {
    invalid("", "must be an object");
  } else {
    for (const auto& [key, value] : body.items()) {
      if (key != "sourceRef" && key != "since") invalid(key, "unknown field");
    }
    if (!body.contains("sourceRef") || !body["sourceRef"].is_string() ||
        body["sourceRef"].get<std::string>().empty()) {
      invalid("sourceRef", "missing");
    } else {
      ref = body["sourceRef"].get<std::string>();
    }
    if (body.contains("since") && !body["since"].is_null()) {
      if (!body["since"].is_string() || !parse_timestamp(body["since"].get<std::string>())) {
        invalid("since", "must be an ISO 8601 date or UTC timestamp");
      } else {
        since = body["since"].get<std::string>();
      }
    }
  }
  if (!errors.empty()) return error_response(ctx, errors);

  const IngestJob job = ctx.ingest->start(ref, since);
  ApiResponse r = respond(202, {{"data", job_resource(ctx, job)}, {"links", ctx.links("ingest-job")}});
  r.headers["Location"] = ctx.url(api_path("/ingest/") + job.job_id);
  return r;
}

ApiResponse Api::get_jobs(const Context& ctx) const {
  json data = json::array();
  for (const auto& job : ctx.ingest->jobs()) data.push_back(job_resource(ctx, job));
  return respond(200, {{"data", std::move(data)}, {"links", ctx.links("ingest-job-list")}});
}

ApiResponse Api::get_job(const Context& ctx, std::string_view id) const {
  auto job = ctx.ingest->job(id);
  if (!job) {
    return error_response(ctx, {404, "not-found", reason(404), "no ingest job " + std::string(id)});
  }
  return respond(200, {{"data", job_resource(ctx, *job)}, {"links", ctx.links("ingest-job")}});
}

ApiResponse Api::get_stats(const Context& ctx) const {
  const StoreStats stats = ctx.store->stats();
  return respond(200, {{"data", {{"type", "stats"},
                                 {"id", "store"},
                                 {"attributes", {{"recordCount", stats.record_count},
                                                 {"edgeCount", stats.edge_count},
                                                 {"perSource", stats.per_source},
                                                 {"perFormat", stats.per_format}}},
                                 {"links", {{"self", ctx.url(api_path("/stats"))}}}}},
                       {"links", ctx.links("stats")}});
}

ApiResponse Api::get_schemas(const Context& ctx) const {
  json data = json::array();
  for (const auto& name : api_schema_names()) {
    data.push_back({{"type", "schema"},
                    {"id", name},
                    {"attributes", {{"url", ctx.schema_url(name)}}},
                    {"links", {{"self", ctx.schema_url(name)}}}});
  }
  return respond(200, {{"data", std::move(data)}, {"links", ctx.links("schema-list")}});
}

ApiResponse Api::get_schema(const Context& ctx, std::string_view name) const {
  auto schema = api_schema(name);
  if (!schema) {
    return error_response(ctx, {404, "not-found", reason(404), "no schema " + std::string(name)});
  }
  (*schema)["$id"] = ctx.schema_url(name);
  return document_response(*schema);
}

ApiResponse Api::get_openapi(const Context& ctx) const {
  return document_response(openapi_document(ctx.origin));
}

}  // namespace metalake
