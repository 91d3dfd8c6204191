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

#include "metalake/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <ctime>
#include <utility>

#include "metalake/error.hpp"

namespace metalake {

namespace {

constexpr std::array<std::string_view, kResourceTypeCount> kResourceTypeNames = {
    "Audiovisual",       "Book",
    "BookChapter",       "Collection",
    "ComputationalNotebook", "ConferencePaper",
    "ConferenceProceeding",  "DataPaper",
    "Dataset",           "Dissertation",
    "Event",             "Image",
    "Instrument",        "InteractiveResource",
    "Journal",           "JournalArticle",
    "Model",             "OutputManagementPlan",
    "PeerReview",        "PhysicalObject",
    "Preprint",          "Report",
    "Service",           "Software",
    "Sound",             "Standard",
    "StudyRegistration", "Text",
    "Workflow",          "Other"};

constexpr std::array<std::string_view, 7> kSchemeNames = {
    "DOI", "URN", "Handle", "ISBN", "ISSN", "URL", "other"};

constexpr std::array<std::string_view, 5> kFormatNames = {
    "DataCite", "DublinCore", "LIDO", "MARC", "MODS"};

constexpr std::array<std::string_view, 8> kLabelNames = {
    "HasPart",         "IsPartOf",       "IsVersionOf",   "HasVersion",
    "IsVariantFormOf", "IsIdenticalTo", "IsDerivedFrom", "IsSourceOf"};

// Lowercase ASCII letters and digits only.
std::string squash(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool istarts_with(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names,
                           std::string_view name) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == name) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

bool is_lower_hex(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
}

std::optional<std::size_t> digest_length(std::string_view algorithm) {
  const std::string a = squash(algorithm);
  if (a == "md5") return 32;
  if (a == "sha1") return 40;
  if (a == "sha224") return 56;
  if (a == "sha256") return 64;
  if (a == "sha384") return 96;
  if (a == "sha512") return 128;
  if (a == "xxh64") return 16;
  return std::nullopt;
}

}  // namespace

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const auto since_midnight = t - day;
  const auto h = duration_cast<hours>(since_midnight);
  const auto m = duration_cast<minutes>(since_midnight - h);
  const auto s = duration_cast<seconds>(since_midnight - h - m);
  const auto ms = since_midnight - h - m - s;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                static_cast<int>(m.count()), static_cast<int>(s.count()),
                static_cast<int>(ms.count()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    if (pos + len > text.size()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (ec != std::errc{} || p != text.data() + pos + len) return std::nullopt;
    return v;
  };
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = num(0, 4), mo = num(5, 2), d = num(8, 2);
  if (!y || !mo || !d) return std::nullopt;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp t = time_point_cast<milliseconds>(sys_days{ymd});
  if (text.size() == 10) return t;
  if (text[10] != 'T' || text.size() < 20 || text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  auto hh = num(11, 2), mm = num(14, 2), ss = num(17, 2);
  if (!hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 60) return std::nullopt;
  t += hours{*hh} + minutes{*mm} + seconds{*ss};
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int frac = 0;
    int digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits < 3) frac = frac * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (int i = digits; i < 3; ++i) frac *= 10;
    t += milliseconds{frac};
  }
  if (pos + 1 != text.size() || text[pos] != 'Z') return std::nullopt;
  return t;
}

std::string_view to_string(ResourceType type) {
  return kResourceTypeNames[static_cast<std::size_t>(type)];
}

std::optional<ResourceType> parse_resource_type(std::string_view name) {
  return lookup<ResourceType>(kResourceTypeNames, name);
}

ResourceType map_resource_type(std::string_view label) {
  const std::string key = squash(label);
  if (key.empty()) return ResourceType::kOther;
  for (std::size_t i = 0; i < kResourceTypeNames.size(); ++i) {
    if (squash(kResourceTypeNames[i]) == key) return static_cast<ResourceType>(i);
  }
  static const std::array<std::pair<std::string_view, ResourceType>, 7> kSynonyms = {{
      {"stillimage", ResourceType::kImage},
      {"movingimage", ResourceType::kAudiovisual},
      {"soundrecording", ResourceType::kSound},
      {"soundrecordingmusical", ResourceType::kSound},
      {"soundrecordingnonmusical", ResourceType::kSound},
      {"softwaremultimedia", ResourceType::kSoftware},
      {"threedimensionalobject", ResourceType::kPhysicalObject},
  }};
  for (const auto& [synonym, type] : kSynonyms) {
    if (synonym == key) return type;
  }
  return ResourceType::kOther;
}

std::string_view to_string(IdentifierScheme scheme) {
  return kSchemeNames[static_cast<std::size_t>(scheme)];
}

std::optional<IdentifierScheme> parse_identifier_scheme(std::string_view name) {
  return lookup<IdentifierScheme>(kSchemeNames, name);
}

IdentifierScheme map_identifier_scheme(std::string_view type_label) {
  const std::string key = squash(type_label);
  if (key == "doi") return IdentifierScheme::kDOI;
  if (key == "urn") return IdentifierScheme::kURN;
  if (key == "handle" || key == "hdl") return IdentifierScheme::kHandle;
  if (key == "isbn") return IdentifierScheme::kISBN;
  if (key == "issn" || key == "eissn") return IdentifierScheme::kISSN;
  if (key == "url" || key == "uri") return IdentifierScheme::kURL;
  return IdentifierScheme::kOther;
}

IdentifierScheme sniff_identifier_scheme(std::string_view value) {
  if (value.starts_with("10.")) return IdentifierScheme::kDOI;
  if (istarts_with(value, "urn:")) return IdentifierScheme::kURN;
  if (istarts_with(value, "http")) return IdentifierScheme::kURL;
  return IdentifierScheme::kOther;
}

std::string_view to_string(SourceFormat format) {
  return kFormatNames[static_cast<std::size_t>(format)];
}

std::optional<SourceFormat> parse_source_format(std::string_view name) {
  return lookup<SourceFormat>(kFormatNames, name);
}

std::string_view to_string(RelationLabel label) {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::string_view to_string(RelationCategory category) {
  switch (category) {
    case RelationCategory::kGrouping: return "grouping";
    case RelationCategory::kSimilarity: return "similarity";
    case RelationCategory::kParenthood: return "parenthood";
  }
  return "unknown";
}

std::optional<RelationLabel> parse_relation_label(std::string_view name) {
  return lookup<RelationLabel>(kLabelNames, name);
}

RelationCategory relation_category(RelationLabel label) {
  switch (label) {
    case RelationLabel::kHasPart:
    case RelationLabel::kIsPartOf:
      return RelationCategory::kGrouping;
    case RelationLabel::kIsVersionOf:
    case RelationLabel::kHasVersion:
    case RelationLabel::kIsVariantFormOf:
    case RelationLabel::kIsIdenticalTo:
      return RelationCategory::kSimilarity;
    case RelationLabel::kIsDerivedFrom:
    case RelationLabel::kIsSourceOf:
      return RelationCategory::kParenthood;
  }
  throw Error(ErrorCode::kInvalidInput, "unknown relation label");
}

RelationCategory relation_category(std::string_view label_name) {
  auto label = parse_relation_label(label_name);
  if (!label) {
    throw Error(ErrorCode::kInvalidInput,
                "unknown relation label '" + std::string(label_name) + "'");
  }
  return relation_category(*label);
}

ValidationReport validate_record(const MetadataRecord& record) {
  ValidationReport report;
  auto add = [&](std::string field, std::string problem) {
    report.push_back({std::move(field), std::move(problem)});
  };

  const auto& d = record.descriptive;
  if (d.title.empty()) add("descriptive.title", "empty");
  for (std::size_t i = 0; i < d.creators.size(); ++i) {
    if (d.creators[i].name.empty()) {
      add("descriptive.creators[" + std::to_string(i) + "].name", "empty");
    }
  }
  if (d.publication_year && (*d.publication_year < 0 || *d.publication_year > 9999)) {
    add("descriptive.publicationYear", "out-of-range");
  }
  for (std::size_t i = 0; i < d.identifiers.size(); ++i) {
    if (d.identifiers[i].value.empty()) {
      add("descriptive.identifiers[" + std::to_string(i) + "].value", "empty");
    }
  }

  const auto& t = record.technical;
  if (t.size && *t.size < 0) add("technical.size", "negative");
  if (t.checksum) {
    if (t.checksum->algorithm.empty()) add("technical.checksum.algorithm", "empty");
    const auto& digest = t.checksum->digest;
    if (digest.empty() || !is_lower_hex(digest)) {
      add("technical.checksum.digest", "not-lowercase-hex");
    } else if (auto len = digest_length(t.checksum->algorithm);
               len && digest.size() != *len) {
      add("technical.checksum.digest", "wrong-length");
    }
  }

  const auto& p = record.processual;
  if (p.record_id.empty()) add("processual.recordId", "missing");
  if (p.original_identifier.empty()) add("processual.originalIdentifier", "empty");
  if (p.modified_at < p.created_at) add("processual.modifiedAt", "before-createdAt");
  if (p.data_steward.empty()) add("processual.dataSteward", "empty");

  const auto& s = record.social;
  if (!(s.quality_score >= 0.0 && s.quality_score <= 1.0)) {
    add("social.qualityScore", "out-of-range");
  }

  if (record.raw.payload.empty()) add("raw.payload", "missing");
  return report;
}

double quality_score(const MetadataRecord& record) {
  const auto& d = record.descriptive;
  const int populated = !d.creators.empty() + d.publisher.has_value() +
                        d.publication_year.has_value() +
                        d.resource_type.has_value() + !d.identifiers.empty() +
                        d.description.has_value() + !d.subjects.empty() +
                        d.language.has_value() + d.rights.has_value() +
                        d.license.has_value();
  return static_cast<double>(populated) / kOptionalDescriptiveFieldCount;
}

}  // namespace metalake
