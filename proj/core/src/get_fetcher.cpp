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

#include "metalake/error.hpp"
#include "metalake/harvest.hpp"
#include "metalake/parsers.hpp"

namespace metalake {

void fetch_get(HttpClient& http, const SourceConfig& source, const RecordSink& sink) {
  const Url url = Url::parse(source.location);
  HttpResponse response = http.get(url, source_auth_headers(source));
  if (!response.ok()) {
    throw TransportError(response.status, "GET " + url.str() + " returned HTTP " +
                                              std::to_string(response.status));
  }
  const xml::Document doc = xml::parse(response.body);
  const std::string_view format_ns = canonical_namespace(source.format);
  if (doc.root.ns_uri == format_ns) {
    ExtractedRecord out;
    out.original_identifier = source.location;
    out.payload = std::move(response.body);
    sink(std::move(out));
    return;
  }
  std::size_t index = 0;
  for (const xml::Element& child : doc.root.children) {
    if (child.ns_uri != format_ns) continue;
    ExtractedRecord out;
    out.original_identifier = source.location + "#" + std::to_string(++index);
    out.payload = response.body.substr(child.begin, child.end - child.begin);
    out.inherited = xml::in_scope_bindings(doc, child);
    sink(std::move(out));
  }
}

}  // namespace metalake
