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

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metalake/record_id.hpp"

namespace metalake {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();
// ISO 8601 UTC with millisecond precision, e.g. 2024-05-01T12:00:00.000Z.
std::string format_timestamp(Timestamp t);
// Accepts YYYY-MM-DD, YYYY-MM-DDThh:mm:ssZ and YYYY-MM-DDThh:mm:ss.sssZ.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// DataCite 4.5 resourceTypeGeneral vocabulary.
enum class ResourceType {
  kAudiovisual,
  kBook,
  kBookChapter,
  kCollection,
  kComputationalNotebook,
  kConferencePaper,
  kConferenceProceeding,
  kDataPaper,
  kDataset,
  kDissertation,
  kEvent,
  kImage,
  kInstrument,
  kInteractiveResource,
  kJournal,
  kJournalArticle,
  kModel,
  kOutputManagementPlan,
  kPeerReview,
  kPhysicalObject,
  kPreprint,
  kReport,
  kService,
  kSoftware,
  kSound,
  kStandard,
  kStudyRegistration,
  kText,
  kWorkflow,
  kOther,
};

inline constexpr std::size_t kResourceTypeCount = 30;

std::string_view to_string(ResourceType type);
// Exact vocabulary name, e.g. "JournalArticle".
std::optional<ResourceType> parse_resource_type(std::string_view name);
// Maps free-text type labels from the source formats onto the vocabulary:
// case- and punctuation-insensitive name match plus a few common synonyms
// (DCMI "StillImage", MODS "sound recording", ...). Unknown labels give kOther.
ResourceType map_resource_type(std::string_view label);

enum class IdentifierScheme { kDOI, kURN, kHandle, kISBN, kISSN, kURL, kOther };

std::string_view to_string(IdentifierScheme scheme);
std::optional<IdentifierScheme> parse_identifier_scheme(std::string_view name);
// Maps an identifierType-like attribute (doi, hdl, uri, ...) to a scheme.
IdentifierScheme map_identifier_scheme(std::string_view type_label);
// Guesses the scheme from the value itself: "10." -> DOI, "urn:" -> URN,
// "http" -> URL, anything else -> other.
IdentifierScheme sniff_identifier_scheme(std::string_view value);

enum class SourceFormat { kDataCite, kDublinCore, kLIDO, kMARC, kMODS };

inline constexpr std::array<SourceFormat, 5> kAllSourceFormats = {
    SourceFormat::kDataCite, SourceFormat::kDublinCore, SourceFormat::kLIDO,
    SourceFormat::kMARC, SourceFormat::kMODS};

std::string_view to_string(SourceFormat format);
std::optional<SourceFormat> parse_source_format(std::string_view name);

enum class RelationLabel {
  kHasPart,
  kIsPartOf,
  kIsVersionOf,
  kHasVersion,
  kIsVariantFormOf,
  kIsIdenticalTo,
  kIsDerivedFrom,
  kIsSourceOf,
};

inline constexpr std::array<RelationLabel, 8> kAllRelationLabels = {
    RelationLabel::kHasPart,         RelationLabel::kIsPartOf,
    RelationLabel::kIsVersionOf,     RelationLabel::kHasVersion,
    RelationLabel::kIsVariantFormOf, RelationLabel::kIsIdenticalTo,
    RelationLabel::kIsDerivedFrom,   RelationLabel::kIsSourceOf};

enum class RelationCategory { kGrouping, kSimilarity, kParenthood };

std::string_view to_string(RelationLabel label);
std::string_view to_string(RelationCategory category);
std::optional<RelationLabel> parse_relation_label(std::string_view name);

RelationCategory relation_category(RelationLabel label);
// Throws Error(kInvalidInput) for names outside the label set.
RelationCategory relation_category(std::string_view label_name);

struct Creator {
  std::string name;
  std::optional<std::string> identifier;

  friend bool operator==(const Creator&, const Creator&) = default;
};

struct Identifier {
  IdentifierScheme scheme = IdentifierScheme::kOther;
  std::string value;

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
};

struct DescriptiveBlock {
  std::string title;
  std::vector<Creator> creators;
  std::optional<std::string> publisher;
  std::optional<int> publication_year;
  std::optional<ResourceType> resource_type;
  std::vector<Identifier> identifiers;
  std::optional<std::string> description;
  std::vector<std::string> subjects;
  std::optional<std::string> language;
  std::optional<std::string> rights;
  std::optional<std::string> license;

  friend bool operator==(const DescriptiveBlock&, const DescriptiveBlock&) = default;
};

struct Checksum {
  std::string algorithm;
  std::string digest;

  friend bool operator==(const Checksum&, const Checksum&) = default;
};

struct TechnicalBlock {
  std::optional<std::string> location;
  std::optional<std::string> format;
  std::optional<std::int64_t> size;
  std::optional<Checksum> checksum;

  friend bool operator==(const TechnicalBlock&, const TechnicalBlock&) = default;
};

struct ProcessualBlock {
  RecordId record_id;
  std::string source;
  std::string original_identifier;
  Timestamp created_at{};
  Timestamp modified_at{};
  std::string data_steward;
  SourceFormat ingest_format = SourceFormat::kDataCite;

  friend bool operator==(const ProcessualBlock&, const ProcessualBlock&) = default;
};

struct SocialBlock {
  std::vector<std::string> keywords;
  std::uint64_t view_count = 0;
  double quality_score = 0.0;

  friend bool operator==(const SocialBlock&, const SocialBlock&) = default;
};

enum class Encoding { kXML };

struct RawBlock {
  std::string payload;
  Encoding encoding = Encoding::kXML;
  std::string media_type = "application/xml";

  friend bool operator==(const RawBlock&, const RawBlock&) = default;
};

struct MetadataRecord {
  DescriptiveBlock descriptive;
  TechnicalBlock technical;
  ProcessualBlock processual;
  SocialBlock social;
  RawBlock raw;

  friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

struct RelationEdge {
  RecordId from;
  RelationLabel label = RelationLabel::kHasPart;
  RecordId to;

  friend auto operator<=>(const RelationEdge&, const RelationEdge&) = default;
};

// A relation declared inside a record's payload, pointing at another record
// by one of its descriptive identifiers.
struct EmbeddedRelation {
  Identifier target;
  RelationLabel label = RelationLabel::kIsPartOf;

  friend auto operator<=>(const EmbeddedRelation&, const EmbeddedRelation&) = default;
};

struct Violation {
  std::string field;
  std::string problem;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

// Lists every invariant violation of the record; empty means valid.
ValidationReport validate_record(const MetadataRecord& record);

inline constexpr int kOptionalDescriptiveFieldCount = 10;

// Fraction of the ten optional descriptive fields that are populated.
double quality_score(const MetadataRecord& record);

}  // namespace metalake
