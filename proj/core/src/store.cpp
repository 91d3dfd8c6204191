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

#include "metalake/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <tuple>

#include <nlohmann/json.hpp>

#include "metalake/error.hpp"
#include "metalake/record_json.hpp"
#include "metalake/text.hpp"

namespace metalake {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kAllFacetFields.size()> kFacetNames = {
    "resourceType", "publicationYear", "language", "source", "ingestFormat", "dataSteward"};

constexpr const char* kLogName = "records.log";
constexpr const char* kLockName = "LOCK";

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

void check_page(const Page& page) {
  if (page.number < 1) throw Error(ErrorCode::kInvalidInput, "page number must be >= 1");
  if (page.size < 1 || page.size > kMaxPageSize) {
    throw Error(ErrorCode::kInvalidInput,
                "page size must be between 1 and " + std::to_string(kMaxPageSize));
  }
}

template <typename T>
std::vector<T> slice(const std::vector<T>& all, const Page& page) {
  const std::size_t begin = (page.number - 1) * page.size;
  if (begin >= all.size()) return {};
  const std::size_t end = std::min(all.size(), begin + page.size);
  return std::vector<T>(all.begin() + static_cast<std::ptrdiff_t>(begin),
                        all.begin() + static_cast<std::ptrdiff_t>(end));
}

void check_filters(const std::map<FacetField, std::string>& filters) {
  for (const auto& [field, value] : filters) {
    bool ok = true;
    switch (field) {
      case FacetField::kResourceType:
        ok = parse_resource_type(value).has_value();
        break;
      case FacetField::kIngestFormat:
        ok = parse_source_format(value).has_value();
        break;
      case FacetField::kPublicationYear:
        ok = !value.empty() && value.size() <= 4 &&
             std::all_of(value.begin(), value.end(), [](unsigned char c) { return std::isdigit(c); });
        break;
      default:
        break;
    }
    if (!ok) {
      throw Error(ErrorCode::kInvalidInput, "invalid value '" + value + "' for facet " +
                                                std::string(to_string(field)));
    }
  }
}

std::vector<std::string> distinct_query_tokens(std::string_view query) {
  std::vector<std::string> tokens;
  for (auto& t : tokenize(query)) {
    if (std::find(tokens.begin(), tokens.end(), t) == tokens.end()) tokens.push_back(std::move(t));
  }
  return tokens;
}

}  // namespace

std::string_view to_string(FacetField field) {
  return kFacetNames[static_cast<std::size_t>(field)];
}

std::optional<FacetField> parse_facet_field(std::string_view name) {
  for (std::size_t i = 0; i < kFacetNames.size(); ++i) {
    if (kFacetNames[i] == name) return static_cast<FacetField>(i);
  }
  return std::nullopt;
}

std::optional<std::string> facet_value(const MetadataRecord& r, FacetField field) {
  switch (field) {
    case FacetField::kResourceType:
      if (r.descriptive.resource_type) return std::string(to_string(*r.descriptive.resource_type));
      return std::nullopt;
    case FacetField::kPublicationYear:
      if (r.descriptive.publication_year) return std::to_string(*r.descriptive.publication_year);
      return std::nullopt;
    case FacetField::kLanguage:
      return r.descriptive.language;
    case FacetField::kSource:
      return r.processual.source;
    case FacetField::kIngestFormat:
      return std::string(to_string(r.processual.ingest_format));
    case FacetField::kDataSteward:
      return r.processual.data_steward;
  }
  return std::nullopt;
}

std::vector<std::string> indexed_terms(const MetadataRecord& r) {
  std::vector<std::string> terms;
  auto add = [&](std::string_view text) {
    for (auto& t : tokenize(text)) terms.push_back(std::move(t));
  };
  const auto& d = r.descriptive;
  add(d.title);
  if (d.description) add(*d.description);
  for (const auto& s : d.subjects) add(s);
  for (const auto& k : r.social.keywords) add(k);
  for (const auto& c : d.creators) add(c.name);
  if (d.publisher) add(*d.publisher);
  return terms;
}

// Append-only JSON-lines log guarded by an exclusive flock on the directory.
class Store::Log {
 public:
  Log(const std::filesystem::path& dir, bool sync) : dir_(dir), sync_(sync) {
    lock_fd_ = ::open((dir / kLockName).c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (lock_fd_ < 0) io_error("cannot open lock file in " + dir.string());
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(lock_fd_);
      throw Error(ErrorCode::kConflict, "store " + dir.string() + " is locked by another process");
    }
  }

  ~Log() {
    if (fd_ >= 0) ::close(fd_);
    if (lock_fd_ >= 0) ::close(lock_fd_);
  }

  std::filesystem::path path() const { return dir_ / kLogName; }

  void open_for_append() {
    fd_ = ::open(path().c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) io_error("cannot open " + path().string());
  }

  // One write(2) per entry so a killed process leaves at most one torn,
  // unterminated tail line.
  void append(const std::string& line) {
    std::string buf = line;
    buf.push_back('\n');
    const char* p = buf.data();
    std::size_t left = buf.size();
    while (left > 0) {
      const ssize_t n = ::write(fd_, p, left);
      if (n < 0) {
        if (errno == EINTR) continue;
        io_error("append to " + path().string());
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
    if (sync_ && ::fdatasync(fd_) != 0) io_error("fdatasync " + path().string());
  }

  void replace_with(const std::vector<std::string>& lines) {
    const auto tmp = dir_ / (std::string(kLogName) + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      for (const auto& l : lines) out << l << '\n';
      out.flush();
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    }
    int tfd = ::open(tmp.c_str(), O_RDONLY | O_CLOEXEC);
    if (tfd >= 0) {
      ::fsync(tfd);
      ::close(tfd);
    }
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    std::filesystem::rename(tmp, path());
    open_for_append();
  }

 private:
  std::filesystem::path dir_;
  bool sync_;
  int fd_ = -1;
  int lock_fd_ = -1;
};

Store::Store() = default;
Store::~Store() = default;

std::unique_ptr<Store> Store::in_memory() { return std::unique_ptr<Store>(new Store()); }

std::unique_ptr<Store> Store::open(const std::filesystem::path& directory, StoreOptions options) {
  std::filesystem::create_directories(directory);
  std::unique_ptr<Store> store(new Store());
  store->log_ = std::make_unique<Log>(directory, options.sync_writes);
  store->replay(store->log_->path());
  store->log_->open_for_append();
  return store;
}

void Store::replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  std::size_t pos = 0;
  std::size_t good_end = 0;
  while (pos < content.size()) {
    const std::size_t nl = content.find('\n', pos);
    const bool last = nl == std::string::npos;
    const std::string_view line(content.data() + pos, (last ? content.size() : nl) - pos);
    json j;
    try {
      if (last) throw std::runtime_error("unterminated entry");
      j = json::parse(line);
    } catch (const std::exception& e) {
      // Only an unterminated tail from an interrupted append is recoverable.
      if (last || content.find('\n', nl + 1) == std::string::npos) break;
      throw Error(ErrorCode::kIo, "corrupt store log " + path.string() + " at byte " +
                                      std::to_string(pos) + ": " + e.what());
    }
    const std::string op = j.value("op", "");
    if (op == "put") {
      Entry entry{record_from_json(j.at("record")), {}};
      for (const auto& r : j.value("relations", json::array())) {
        entry.relations.push_back(relation_from_json(r));
      }
      apply_upsert(std::move(entry));
    } else if (op == "edge") {
      auto from = RecordId::parse(j.at("from").get<std::string>());
      auto to = RecordId::parse(j.at("to").get<std::string>());
      auto label = parse_relation_label(j.at("label").get<std::string>());
      if (!from || !to || !label) throw Error(ErrorCode::kIo, "corrupt edge entry in store log");
      apply_edge({*from, *label, *to});
    } else if (op == "views") {
      auto id = RecordId::parse(j.at("id").get<std::string>());
      if (id) {
        if (auto it = vertices_.find(*id); it != vertices_.end()) {
          it->second.record.social.view_count = j.at("viewCount").get<std::uint64_t>();
        }
      }
    } else {
      throw Error(ErrorCode::kIo, "unknown store log entry '" + op + "'");
    }
    pos = nl + 1;
    good_end = pos;
  }
  if (good_end < content.size()) std::filesystem::resize_file(path, good_end);
}

void Store::append(const std::string& line) {
  if (log_) log_->append(line);
}

Store::IdentifierKey Store::identifier_key(const Identifier& identifier) {
  // DOIs are case-insensitive; other schemes compare exactly.
  if (identifier.scheme == IdentifierScheme::kDOI) {
    return {identifier.scheme, to_lower(identifier.value)};
  }
  return {identifier.scheme, identifier.value};
}

void Store::index_entry(const Entry& entry) {
  const auto& r = entry.record;
  const RecordId& id = r.processual.record_id;
  std::map<std::string, std::uint32_t> tf;
  for (auto& t : indexed_terms(r)) ++tf[std::move(t)];
  for (const auto& [term, count] : tf) postings_[term][id] = count;
  for (FacetField f : kAllFacetFields) {
    if (auto v = facet_value(r, f)) facets_[static_cast<std::size_t>(f)][*v].insert(id);
  }
  for (const auto& ident : r.descriptive.identifiers) identifiers_[identifier_key(ident)].insert(id);
  for (const auto& rel : entry.relations) {
    relation_targets_[identifier_key(rel.target)].insert({id, rel.label});
  }
}

void Store::unindex_entry(const Entry& entry) {
  const auto& r = entry.record;
  const RecordId& id = r.processual.record_id;
  for (const auto& term : indexed_terms(r)) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    it->second.erase(id);
    if (it->second.empty()) postings_.erase(it);
  }
  for (FacetField f : kAllFacetFields) {
    if (auto v = facet_value(r, f)) {
      auto& index = facets_[static_cast<std::size_t>(f)];
      if (auto it = index.find(*v); it != index.end()) {
        it->second.erase(id);
        if (it->second.empty()) index.erase(it);
      }
    }
  }
  for (const auto& ident : r.descriptive.identifiers) {
    if (auto it = identifiers_.find(identifier_key(ident)); it != identifiers_.end()) {
      it->second.erase(id);
      if (it->second.empty()) identifiers_.erase(it);
    }
  }
  for (const auto& rel : entry.relations) {
    if (auto it = relation_targets_.find(identifier_key(rel.target)); it != relation_targets_.end()) {
      it->second.erase({id, rel.label});
      if (it->second.empty()) relation_targets_.erase(it);
    }
  }
}

void Store::clear_indexes() {
  postings_.clear();
  for (auto& f : facets_) f.clear();
  identifiers_.clear();
  relation_targets_.clear();
}

void Store::apply_upsert(Entry entry) {
  const RecordId id = entry.record.processual.record_id;
  auto it = vertices_.find(id);
  if (it != vertices_.end()) {
    unindex_entry(it->second);
    it->second = std::move(entry);
    index_entry(it->second);
  } else {
    auto [pos, inserted] = vertices_.emplace(id, std::move(entry));
    index_entry(pos->second);
  }
}

void Store::apply_edge(const RelationEdge& edge) {
  if (edges_.insert(edge).second) {
    out_edges_[edge.from].insert({edge.label, edge.to});
    in_edges_[edge.to].insert({edge.label, edge.from});
  }
}

UpsertResult Store::upsert_record(MetadataRecord record, std::vector<EmbeddedRelation> relations) {
  auto report = validate_record(record);
  if (!report.empty()) {
    std::string message = "invalid record:";
    for (const auto& v : report) message += " " + v.field + " (" + v.problem + ")";
    throw Error(ErrorCode::kValidation, message);
  }

  std::unique_lock lock(mutex_);
  const RecordId id = record.processual.record_id;
  auto it = vertices_.find(id);
  const bool exists = it != vertices_.end();
  if (exists) {
    const auto& old = it->second.record;
    record.processual.created_at = old.processual.created_at;
    record.social.view_count = old.social.view_count;
    record.processual.modified_at = std::max(now_utc(), record.processual.created_at);
  }

  json rels = json::array();
  for (const auto& r : relations) rels.push_back(to_json(r));
  std::string line;
  try {
    line = json{{"op", "put"}, {"record", to_json(record)}, {"relations", rels}}.dump();
  } catch (const json::type_error&) {
    throw Error(ErrorCode::kValidation, "record text is not valid UTF-8");
  }
  append(line);

  apply_upsert(Entry{std::move(record), std::move(relations)});
  return exists ? UpsertResult::kUpdated : UpsertResult::kCreated;
}

std::optional<MetadataRecord> Store::get_record(const RecordId& id, bool count_view) {
  if (!count_view) {
    std::shared_lock lock(mutex_);
    auto it = vertices_.find(id);
    if (it == vertices_.end()) return std::nullopt;
    return it->second.record;
  }
  std::unique_lock lock(mutex_);
  auto it = vertices_.find(id);
  if (it == vertices_.end()) return std::nullopt;
  MetadataRecord copy = it->second.record;
  const std::uint64_t next = copy.social.view_count + 1;
  append(json{{"op", "views"}, {"id", id.str()}, {"viewCount", next}}.dump());
  it->second.record.social.view_count = next;
  return copy;
}

bool Store::contains(const RecordId& id) const {
  std::shared_lock lock(mutex_);
  return vertices_.count(id) > 0;
}

std::vector<EmbeddedRelation> Store::embedded_relations(const RecordId& id) const {
  std::shared_lock lock(mutex_);
  auto it = vertices_.find(id);
  if (it == vertices_.end()) return {};
  return it->second.relations;
}

EdgeResult Store::add_edge(const RelationEdge& edge) {
  if (edge.from == edge.to) {
    throw Error(ErrorCode::kInvalidInput, "self-loop on record " + edge.from.str());
  }
  std::unique_lock lock(mutex_);
  for (const RecordId* end : {&edge.from, &edge.to}) {
    if (!vertices_.count(*end)) {
      throw Error(ErrorCode::kReferentialIntegrity, "edge endpoint " + end->str() + " is not stored");
    }
  }
  if (edges_.count(edge)) return EdgeResult::kExists;
  append(json{{"op", "edge"},
              {"from", edge.from.str()},
              {"label", to_string(edge.label)},
              {"to", edge.to.str()}}
             .dump());
  apply_edge(edge);
  return EdgeResult::kCreated;
}

std::vector<Neighbor> Store::neighbors(const RecordId& id, Direction direction,
                                       std::optional<RelationLabel> label) const {
  std::shared_lock lock(mutex_);
  if (!vertices_.count(id)) throw Error(ErrorCode::kNotFound, "record " + id.str() + " not found");

  struct Hit {
    RelationLabel label;
    RecordId other;
    bool outgoing;
  };
  std::vector<Hit> hits;
  auto collect = [&](const auto& adjacency, bool outgoing) {
    auto it = adjacency.find(id);
    if (it == adjacency.end()) return;
    for (const auto& [l, other] : it->second) {
      if (!label || *label == l) hits.push_back({l, other, outgoing});
    }
  };
  if (direction != Direction::kIn) collect(out_edges_, true);
  if (direction != Direction::kOut) collect(in_edges_, false);
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.label, a.other, b.outgoing) < std::tie(b.label, b.other, a.outgoing);
  });

  std::vector<Neighbor> out;
  out.reserve(hits.size());
  for (const auto& h : hits) {
    RelationEdge edge = h.outgoing ? RelationEdge{id, h.label, h.other}
                                   : RelationEdge{h.other, h.label, id};
    out.push_back({std::move(edge), vertices_.at(h.other).record});
  }
  return out;
}

std::vector<RelationEdge> Store::edges() const {
  std::shared_lock lock(mutex_);
  return {edges_.begin(), edges_.end()};
}

std::vector<ScoredId> Store::fulltext_locked(std::string_view query) const {
  const auto tokens = distinct_query_tokens(query);
  if (tokens.empty()) throw Error(ErrorCode::kInvalidInput, "empty full-text query");

  std::vector<const std::map<RecordId, std::uint32_t>*> lists;
  for (const auto& t : tokens) {
    auto it = postings_.find(t);
    if (it == postings_.end()) return {};
    lists.push_back(&it->second);
  }
  const double n = static_cast<double>(vertices_.size());
  // Walk the shortest posting list and probe the others.
  const auto* shortest = *std::min_element(lists.begin(), lists.end(),
                                           [](auto* a, auto* b) { return a->size() < b->size(); });
  std::vector<ScoredId> hits;
  for (const auto& [id, unused] : *shortest) {
    double score = 0.0;
    bool all = true;
    for (const auto* list : lists) {
      auto it = list->find(id);
      if (it == list->end()) {
        all = false;
        break;
      }
      const double df = static_cast<double>(list->size());
      score += static_cast<double>(it->second) * std::log(1.0 + n / df);
    }
    if (all) hits.push_back({id, score});
  }
  std::sort(hits.begin(), hits.end(), [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  return hits;
}

std::vector<RecordId> Store::facets_locked(const std::map<FacetField, std::string>& filters) const {
  if (filters.empty()) {
    std::vector<RecordId> all;
    all.reserve(vertices_.size());
    for (const auto& [id, e] : vertices_) all.push_back(id);
    return all;
  }
  std::vector<const std::set<RecordId>*> sets;
  for (const auto& [field, value] : filters) {
    const auto& index = facets_[static_cast<std::size_t>(field)];
    auto it = index.find(value);
    if (it == index.end()) return {};
    sets.push_back(&it->second);
  }
  std::sort(sets.begin(), sets.end(), [](auto* a, auto* b) { return a->size() < b->size(); });
  std::vector<RecordId> out;
  for (const auto& id : *sets.front()) {
    if (std::all_of(sets.begin() + 1, sets.end(), [&](auto* s) { return s->count(id) > 0; })) {
      out.push_back(id);
    }
  }
  return out;
}

FacetCounts Store::facet_counts_locked(const std::vector<RecordId>& ids) const {
  FacetCounts counts;
  for (FacetField f : kAllFacetFields) counts[f];
  for (const auto& id : ids) {
    const auto& r = vertices_.at(id).record;
    for (FacetField f : kAllFacetFields) {
      if (auto v = facet_value(r, f)) ++counts[f][*v];
    }
  }
  return counts;
}

SearchResult Store::search(const SearchRequest& request) const {
  check_page(request.page);
  check_filters(request.filters);
  if (request.text && tokenize(*request.text).empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty full-text query");
  }

  std::shared_lock lock(mutex_);
  std::vector<ScoredId> hits;
  if (request.text) {
    hits = fulltext_locked(*request.text);
    if (!request.filters.empty()) {
      const auto allowed = facets_locked(request.filters);
      std::erase_if(hits, [&](const ScoredId& h) {
        return !std::binary_search(allowed.begin(), allowed.end(), h.id);
      });
    }
  } else {
    for (auto& id : facets_locked(request.filters)) hits.push_back({std::move(id), 0.0});
  }
  if (request.expr) {
    std::erase_if(hits, [&](const ScoredId& h) {
      return !request.expr->matches(vertices_.at(h.id).record);
    });
  }

  std::vector<RecordId> ids;
  ids.reserve(hits.size());
  for (const auto& h : hits) ids.push_back(h.id);

  SearchResult result;
  result.total = hits.size();
  result.facet_counts = facet_counts_locked(ids);
  result.hits = slice(hits, request.page);
  return result;
}

FulltextResult Store::search_fulltext(std::string_view query, Page page) const {
  check_page(page);
  std::shared_lock lock(mutex_);
  auto hits = fulltext_locked(query);
  return {hits.size(), slice(hits, page)};
}

FacetResult Store::search_facets(const std::map<FacetField, std::string>& filters, Page page) const {
  check_page(page);
  check_filters(filters);
  std::shared_lock lock(mutex_);
  auto ids = facets_locked(filters);
  FacetResult result;
  result.total = ids.size();
  result.facet_counts = facet_counts_locked(ids);
  result.ids = slice(ids, page);
  return result;
}

QueryResult Store::filter_query(const FilterExpr& expr, Page page) const {
  check_page(page);
  std::shared_lock lock(mutex_);
  std::vector<RecordId> ids;
  for (const auto& [id, entry] : vertices_) {
    if (expr.matches(entry.record)) ids.push_back(id);
  }
  return {ids.size(), slice(ids, page)};
}

std::vector<RecordId> Store::find_by_identifier(const Identifier& identifier) const {
  std::shared_lock lock(mutex_);
  auto it = identifiers_.find(identifier_key(identifier));
  if (it == identifiers_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<std::pair<RecordId, RelationLabel>> Store::relations_targeting(
    const Identifier& identifier) const {
  std::shared_lock lock(mutex_);
  auto it = relation_targets_.find(identifier_key(identifier));
  if (it == relation_targets_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<RecordId> Store::all_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<RecordId> ids;
  ids.reserve(vertices_.size());
  for (const auto& [id, e] : vertices_) ids.push_back(id);
  return ids;
}

StoreStats Store::stats() const {
  std::shared_lock lock(mutex_);
  StoreStats s;
  s.record_count = vertices_.size();
  s.edge_count = edges_.size();
  for (const auto& [id, e] : vertices_) {
    ++s.per_source[e.record.processual.source];
    ++s.per_format[std::string(to_string(e.record.processual.ingest_format))];
  }
  return s;
}

void Store::rebuild_indexes() {
  std::unique_lock lock(mutex_);
  clear_indexes();
  for (const auto& [id, entry] : vertices_) index_entry(entry);
}

void Store::compact() {
  std::unique_lock lock(mutex_);
  if (!log_) return;
  std::vector<std::string> lines;
  lines.reserve(vertices_.size() + edges_.size());
  for (const auto& [id, entry] : vertices_) {
    json rels = json::array();
    for (const auto& r : entry.relations) rels.push_back(to_json(r));
    lines.push_back(
        json{{"op", "put"}, {"record", to_json(entry.record)}, {"relations", rels}}.dump());
  }
  for (const auto& e : edges_) {
    lines.push_back(json{{"op", "edge"},
                         {"from", e.from.str()},
                         {"label", to_string(e.label)},
                         {"to", e.to.str()}}
                        .dump());
  }
  log_->replace_with(lines);
}

}  // namespace metalake
