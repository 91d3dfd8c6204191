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
#include <string_view>
#include <vector>

#include "metalake/model.hpp"
#include "metalake/xml.hpp"

namespace metalake {

namespace ns {
inline constexpr std::string_view kOaiDc = "http://www.openarchives.org/OAI/2.0/oai_dc/";
inline constexpr std::string_view kDc = "http://purl.org/dc/elements/1.1/";
inline constexpr std::string_view kDataCite = "http://datacite.org/schema/kernel-4";
inline constexpr std::string_view kMods = "http://www.loc.gov/mods/v3";
inline constexpr std::string_view kMarc = "http://www.loc.gov/MARC21/slim";
inline constexpr std::string_view kLido = "http://www.lido-schema.org";
}  // namespace ns

// The refined part of a record a crosswalk could map. Anything it cannot
// map stays empty; the record's raw payload keeps the rest.
struct ParsedFields {
  DescriptiveBlock descriptive;
  TechnicalBlock technical;
  std::vector<EmbeddedRelation> embedded_relations;

  friend bool operator==(const ParsedFields&, const ParsedFields&) = default;
};

// Root-element namespace a document of `format` must carry.
std::string_view canonical_namespace(SourceFormat format);
std::optional<SourceFormat> format_for_namespace(std::string_view ns_uri);

// Format whose canonical namespace matches the root element, if any.
// Throws ParseError on malformed XML.
std::optional<SourceFormat> detect_namespace(std::string_view xml);

// Partial transformation of one payload into the unified schema. Throws
// ParseError on malformed XML and Error(kFormatMismatch) when the root
// namespace does not belong to `format`. `inherited` supplies namespace
// bindings of an envelope the payload was cut from.
ParsedFields crosswalk(SourceFormat format, std::string_view xml,
                       const xml::NamespaceBindings& inherited = {});
ParsedFields crosswalk(SourceFormat format, const xml::Element& root);

// First run of four consecutive ASCII digits, e.g. "c. 1999-05" -> 1999.
std::optional<int> extract_year(std::string_view text);

}  // namespace metalake
