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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metalake/error.hpp"
#include "metalake/model.hpp"
#include "metalake/source.hpp"
#include "simulators.hpp"

namespace metalake::testing {

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Minimal valid record: title, mandatory processual fields and a payload.
MetadataRecord make_record(const std::string& source, const std::string& original_identifier,
                           const std::string& title);

// Deterministic pseudo-random records with every searchable field varied
// and some fields left absent.
std::vector<MetadataRecord> generate_corpus(std::size_t n, std::uint64_t seed);

struct DocFields {
  std::string title;
  std::vector<std::string> creators;
  std::optional<std::string> doi;
  std::optional<int> year;
  std::optional<std::string> language;
  std::optional<std::string> resource_type;  // DataCite resourceTypeGeneral / DC type
  std::vector<std::string> subjects;
  // (relationType, DOI) pairs
  std::vector<std::pair<std::string, std::string>> relations;
};

// One standalone document per format, each carrying its own namespace
// declarations.
std::string datacite_doc(const DocFields& doc_fields);
std::string dublin_core_doc(const DocFields& doc_fields);
std::string mods_doc(const DocFields& doc_fields);
std::string marc_doc(const DocFields& doc_fields);
std::string lido_doc(const DocFields& doc_fields);
std::string document_for(SourceFormat format, const DocFields& doc_fields);

SourceConfig make_source(const std::string& location, Protocol protocol, SourceFormat format);

// n records "oai:sim:<i>" (i from `first`) with DOI 10.1234/sim.<i>, title
// "Record <i>" and datestamp 2024-03-01.
std::vector<OaiRecord> numbered_oai_records(std::size_t n, SourceFormat format, std::size_t first = 0);

std::string read_file(const std::filesystem::path& path);

// Crosswalk fixture documents under fixtures/crosswalk/<format>/ paired
// with their expected ParsedFields JSON, sorted by path.
struct GoldenCase {
  SourceFormat format;
  std::filesystem::path document;
  std::filesystem::path expected;
};
std::vector<GoldenCase> golden_cases();

// Code of the metalake::Error thrown by `f`, or nullopt when it returns.
template <class F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace metalake::testing
