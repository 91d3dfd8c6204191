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

#include <set>

#include <openssl/evp.h>

#include "metalake/error.hpp"
#include "metalake/harvest.hpp"
#include "metalake/text.hpp"

namespace metalake {

namespace {

constexpr std::string_view kOaiNs = "http://www.openarchives.org/OAI/2.0/";

std::string basic_auth(const Credentials& c) {
  const std::string plain = c.username + ":" + c.password;
  std::string out(4 * ((plain.size() + 2) / 3) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(plain.data()),
                                static_cast<int>(plain.size()));
  out.resize(static_cast<std::size_t>(n));
  return "Basic " + out;
}

Url with_params(const Url& base, const QueryParams& params) {
  Url url = base;
  const std::string extra = build_query(params);
  url.query = url.query.empty() ? extra : url.query + "&" + extra;
  return url;
}

[[noreturn]] void bad_envelope(const std::string& what) {
  throw ParseError("malformed OAI-PMH response: " + what, 1, 1);
}

}  // namespace

HttpHeaders source_auth_headers(const SourceConfig& source) {
  if (!source.credentials) return {};
  return {{"Authorization", basic_auth(*source.credentials)}};
}

void harvest_oaipmh(HttpClient& http, const SourceConfig& source,
                    const std::optional<std::string>& since, const RecordSink& sink,
                    const CursorSink& on_cursor) {
  const Url base = Url::parse(source.location);
  const HttpHeaders headers = source_auth_headers(source);

  QueryParams params = {{"verb", "ListRecords"}, {"metadataPrefix", source.metadata_prefix()}};
  if (source.oai_set) params.emplace_back("set", *source.oai_set);
  if (since) params.emplace_back("from", *since);

  std::set<std::string> seen_tokens;
  for (;;) {
    const Url url = with_params(base, params);
    HttpResponse response = http.get(url, headers);
    if (!response.ok()) {
      throw TransportError(response.status, "GET " + url.str() + " returned HTTP " +
                                                std::to_string(response.status));
    }

    const xml::Document doc = xml::parse(response.body);
    const xml::Element& root = doc.root;
    if (!root.is(kOaiNs, "OAI-PMH")) bad_envelope("root element is not OAI-PMH");

    for (const xml::Element* error : root.children_named(kOaiNs, "error")) {
      const std::string code(error->attribute("code").value_or(""));
      if (code == "noRecordsMatch") return;
      throw ProtocolError(code, "OAI-PMH error " + code + ": " + clean_text(error->text()));
    }

    const xml::Element* list = root.child(kOaiNs, "ListRecords");
    if (list == nullptr) bad_envelope("missing ListRecords");

    for (const xml::Element* record : list->children_named(kOaiNs, "record")) {
      const xml::Element* header = record->child(kOaiNs, "header");
      if (header == nullptr) bad_envelope("record without header");
      ExtractedRecord out;
      if (const auto* id = header->child(kOaiNs, "identifier")) {
        out.original_identifier = clean_text(id->text());
      }
      if (const auto* stamp = header->child(kOaiNs, "datestamp")) {
        out.datestamp = clean_text(stamp->text());
      }
      out.deleted = header->attribute("status") == std::optional<std::string_view>("deleted");
      if (!out.deleted) {
        const xml::Element* metadata = record->child(kOaiNs, "metadata");
        if (metadata == nullptr || metadata->children.empty()) {
          bad_envelope("record '" + out.original_identifier + "' without metadata");
        }
        const xml::Element& body = metadata->children.front();
        out.payload = response.body.substr(body.begin, body.end - body.begin);
        out.inherited = xml::in_scope_bindings(doc, body);
      }
      sink(std::move(out));
    }

    const xml::Element* token = list->child(kOaiNs, "resumptionToken");
    const std::string next = token != nullptr ? clean_text(token->text()) : std::string{};
    if (next.empty()) return;
    if (!seen_tokens.insert(next).second) {
      throw ProtocolError("badResumptionToken", "resumption token '" + next + "' repeated");
    }
    if (on_cursor) on_cursor(next);
    params = {{"verb", "ListRecords"}, {"resumptionToken", next}};
  }
}

}  // namespace metalake
