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
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "metalake/filter_expr.hpp"
#include "metalake/model.hpp"

namespace metalake {

enum class FacetField {
  kResourceType,
  kPublicationYear,
  kLanguage,
  kSource,
  kIngestFormat,
  kDataSteward,
};

inline constexpr std::array<FacetField, 6> kAllFacetFields = {
    FacetField::kResourceType, FacetField::kPublicationYear, FacetField::kLanguage,
    FacetField::kSource,       FacetField::kIngestFormat,    FacetField::kDataSteward};

std::string_view to_string(FacetField field);
std::optional<FacetField> parse_facet_field(std::string_view name);
// Value of `field` on `record` as it appears in the facet index, if present.
std::optional<std::string> facet_value(const MetadataRecord& record, FacetField field);

inline constexpr std::size_t kDefaultPageSize = 20;
inline constexpr std::size_t kMaxPageSize = 100;

// 1-based page of a result list.
struct Page {
  std::size_t number = 1;
  std::size_t size = kDefaultPageSize;
};

enum class UpsertResult { kCreated, kUpdated };
enum class EdgeResult { kCreated, kExists };
enum class Direction { kOut, kIn, kBoth };

struct ScoredId {
  RecordId id;
  double score = 0.0;

  friend bool operator==(const ScoredId&, const ScoredId&) = default;
};

using FacetCounts = std::map<FacetField, std::map<std::string, std::size_t>>;

struct FulltextResult {
  std::size_t total = 0;
  std::vector<ScoredId> hits;
};

struct FacetResult {
  std::size_t total = 0;
  std::vector<RecordId> ids;
  FacetCounts facet_counts;
};

struct QueryResult {
  std::size_t total = 0;
  std::vector<RecordId> ids;
};

// Combined search evaluated against one consistent snapshot. Every present
// criterion narrows the result; with `text` the order is by score, otherwise
// by record id.
struct SearchRequest {
  std::optional<std::string> text;
  std::map<FacetField, std::string> filters;
  std::optional<FilterExpr> expr;
  Page page;
};

struct SearchResult {
  std::size_t total = 0;
  std::vector<ScoredId> hits;
  FacetCounts facet_counts;
};

struct StoreStats {
  std::size_t record_count = 0;
  std::size_t edge_count = 0;
  std::map<std::string, std::size_t> per_source;
  std::map<std::string, std::size_t> per_format;

  friend bool operator==(const StoreStats&, const StoreStats&) = default;
};

struct Neighbor {
  RelationEdge edge;
  MetadataRecord record;
};

struct StoreOptions {
  // fdatasync after every log append. Without it, appends survive a process
  // crash but not a power loss.
  bool sync_writes = false;
};

// The metadata graph: records as vertices, labeled relation edges, and the
// full-text, facet and identifier indexes derived from the vertices. Many
// concurrent readers, one writer at a time. A persistent store appends every
// mutation to a JSON-lines log and rebuilds all indexes from it on open.
class Store {
 public:
  static std::unique_ptr<Store> in_memory();
  // Opens or creates a store in `directory`; only one process may hold it.
  static std::unique_ptr<Store> open(const std::filesystem::path& directory,
                                     StoreOptions options = {});

  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Inserts or replaces the record under its processual.recordId. An update
  // keeps the stored createdAt and viewCount and sets modifiedAt to now.
  // Throws Error(kValidation) when validate_record reports violations.
  UpsertResult upsert_record(MetadataRecord record,
                             std::vector<EmbeddedRelation> relations = {});

  // With count_view the stored viewCount is incremented; the returned copy
  // carries the value from before the increment.
  std::optional<MetadataRecord> get_record(const RecordId& id, bool count_view);
  bool contains(const RecordId& id) const;
  std::vector<EmbeddedRelation> embedded_relations(const RecordId& id) const;

  EdgeResult add_edge(const RelationEdge& edge);
  std::vector<Neighbor> neighbors(const RecordId& id, Direction direction,
                                  std::optional<RelationLabel> label = std::nullopt) const;
  std::vector<RelationEdge> edges() const;

  FulltextResult search_fulltext(std::string_view query, Page page) const;
  FacetResult search_facets(const std::map<FacetField, std::string>& filters,
                            Page page) const;
  QueryResult filter_query(const FilterExpr& expr, Page page) const;
  SearchResult search(const SearchRequest& request) const;

  // Records carrying `identifier` among their descriptive identifiers.
  std::vector<RecordId> find_by_identifier(const Identifier& identifier) const;
  // (source record, label) of every stored embedded relation pointing at
  // `identifier`.
  std::vector<std::pair<RecordId, RelationLabel>> relations_targeting(
      const Identifier& identifier) const;

  std::vector<RecordId> all_ids() const;
  StoreStats stats() const;

  void rebuild_indexes();
  // Rewrites the log with one entry per live record/edge.
  void compact();

 private:
  friend class StoreTestPeer;

  struct Entry {
    MetadataRecord record;
    std::vector<EmbeddedRelation> relations;
  };
  using IdentifierKey = std::pair<IdentifierScheme, std::string>;

  class Log;

  Store();

  void index_entry(const Entry& entry);
  void unindex_entry(const Entry& entry);
  void clear_indexes();
  void apply_upsert(Entry entry);
  void apply_edge(const RelationEdge& edge);
  void replay(const std::filesystem::path& path);
  void append(const std::string& line);
  static IdentifierKey identifier_key(const Identifier& identifier);

  std::vector<ScoredId> fulltext_locked(std::string_view query) const;
  std::vector<RecordId> facets_locked(const std::map<FacetField, std::string>& filters) const;
  FacetCounts facet_counts_locked(const std::vector<RecordId>& ids) const;

  mutable std::shared_mutex mutex_;
  std::map<RecordId, Entry> vertices_;
  std::set<RelationEdge> edges_;
  std::map<RecordId, std::set<std::pair<RelationLabel, RecordId>>> out_edges_;
  std::map<RecordId, std::set<std::pair<RelationLabel, RecordId>>> in_edges_;

  // Derived indexes; rebuild_indexes() recomputes them from vertices_.
  std::unordered_map<std::string, std::map<RecordId, std::uint32_t>> postings_;
  std::array<std::map<std::string, std::set<RecordId>>, kAllFacetFields.size()> facets_;
  std::map<IdentifierKey, std::set<RecordId>> identifiers_;
  std::map<IdentifierKey, std::set<std::pair<RecordId, RelationLabel>>> relation_targets_;

  std::unique_ptr<Log> log_;
};

// Terms a record contributes to the full-text index, with multiplicity:
// title, description, subjects, keywords, creator names and publisher.
std::vector<std::string> indexed_terms(const MetadataRecord& record);

}  // namespace metalake
