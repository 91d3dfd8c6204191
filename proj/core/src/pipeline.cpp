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

#include "metalake/pipeline.hpp"

#include "metalake/error.hpp"
#include "metalake/text.hpp"

namespace metalake {

std::string_view to_string(JobState state) {
  switch (state) {
    case JobState::kPending:
      return "pending";
    case JobState::kExtracting:
      return "extracting";
    case JobState::kTransforming:
      return "transforming";
    case JobState::kLoading:
      return "loading";
    case JobState::kLinking:
      return "linking";
    case JobState::kDone:
      return "done";
    case JobState::kFailed:
      return "failed";
  }
  return "pending";
}

bool is_terminal(JobState state) {
  return state == JobState::kDone || state == JobState::kFailed;
}

ParsedFields crosswalk_transform(SourceFormat format, const ExtractedRecord& record) {
  return crosswalk(format, record.payload, record.inherited);
}

namespace {

void clean_optional(std::optional<std::string>& value) {
  if (!value) return;
  *value = clean_text(*value);
  if (value->empty()) value.reset();
}

void clean_list(std::vector<std::string>& values) {
  std::vector<std::string> kept;
  for (auto& v : values) {
    auto c = clean_text(v);
    if (!c.empty()) kept.push_back(std::move(c));
  }
  values = std::move(kept);
}

}  // namespace

void clean_fields(ParsedFields& fields) {
  auto& d = fields.descriptive;
  d.title = clean_text(d.title);
  std::vector<Creator> creators;
  for (auto& c : d.creators) {
    c.name = clean_text(c.name);
    clean_optional(c.identifier);
    if (!c.name.empty()) creators.push_back(std::move(c));
  }
  d.creators = std::move(creators);
  clean_optional(d.publisher);
  std::vector<Identifier> identifiers;
  for (auto& id : d.identifiers) {
    id.value = clean_text(id.value);
    if (!id.value.empty()) identifiers.push_back(std::move(id));
  }
  d.identifiers = std::move(identifiers);
  clean_optional(d.description);
  clean_list(d.subjects);
  clean_optional(d.language);
  clean_optional(d.rights);
  clean_optional(d.license);

  auto& t = fields.technical;
  clean_optional(t.location);
  clean_optional(t.format);

  std::vector<EmbeddedRelation> relations;
  for (auto& r : fields.embedded_relations) {
    r.target.value = clean_text(r.target.value);
    if (!r.target.value.empty()) relations.push_back(std::move(r));
  }
  fields.embedded_relations = std::move(relations);
}

std::size_t link_records(Store& store, const std::vector<RecordId>& batch) {
  std::size_t created = 0;
  auto link = [&](const RecordId& from, RelationLabel label, const RecordId& to) {
    if (from == to) return;
    if (store.add_edge({from, label, to}) == EdgeResult::kCreated) ++created;
  };
  for (const RecordId& id : batch) {
    for (const auto& relation : store.embedded_relations(id)) {
      for (const RecordId& target : store.find_by_identifier(relation.target)) {
        link(id, relation.label, target);
      }
    }
    const auto record = store.get_record(id, false);
    if (!record) continue;
    for (const Identifier& identifier : record->descriptive.identifiers) {
      for (const auto& [from, label] : store.relations_targeting(identifier)) {
        link(from, label, id);
      }
    }
  }
  return created;
}

namespace {

struct Transformed {
  MetadataRecord record;
  std::vector<EmbeddedRelation> relations;
};

class Run {
 public:
  Run(Store& store, HttpClient& http, IngestJob job, const PipelineOptions& options)
      : store_(store), http_(http), job_(std::move(job)), options_(options) {}

  IngestJob execute() {
    job_.started_at = now_utc();
    enter(JobState::kExtracting);
    try {
      extract();
    } catch (const std::exception& e) {
      job_.failure = e.what();
    }

    enter(JobState::kTransforming);
    std::vector<Transformed> batch;
    for (auto& extracted : extracted_) {
      if (extracted.deleted) {
        ++job_.counts.skipped;
        continue;
      }
      try {
        batch.push_back(transform(extracted));
      } catch (const std::exception& e) {
        fail_record(extracted.original_identifier, e.what());
      }
    }
    extracted_.clear();

    enter(JobState::kLoading);
    std::vector<RecordId> loaded;
    for (auto& item : batch) {
      const std::string original = item.record.processual.original_identifier;
      const RecordId id = item.record.processual.record_id;
      try {
        store_.upsert_record(std::move(item.record), std::move(item.relations));
        loaded.push_back(id);
        ++job_.counts.loaded;
        progress();
      } catch (const std::exception& e) {
        fail_record(original, e.what());
      }
    }

    enter(JobState::kLinking);
    try {
      job_.edges_created = link_records(store_, loaded);
    } catch (const std::exception& e) {
      if (!job_.failure) job_.failure = e.what();
    }

    job_.finished_at = now_utc();
    enter(job_.failure ? JobState::kFailed : JobState::kDone);
    return std::move(job_);
  }

 private:
  void enter(JobState state) {
    job_.state = state;
    job_.history.push_back(state);
    progress();
  }

  void progress() {
    if (options_.on_progress) options_.on_progress(job_);
  }

  void fail_record(const std::string& original_identifier, const std::string& message) {
    ++job_.counts.failed;
    job_.errors.push_back({original_identifier, message});
  }

  void extract() {
    const SourceConfig& source = job_.source;
    auto sink = [this](ExtractedRecord record) {
      ++job_.counts.seen;
      extracted_.push_back(std::move(record));
    };
    auto on_failure = [this](ExtractFailure failure) {
      ++job_.counts.seen;
      fail_record(failure.original_identifier, failure.message);
    };
    switch (source.protocol) {
      case Protocol::kOAIPMH:
        harvest_oaipmh(http_, source, job_.since, sink, [this](const std::string& token) {
          job_.resumption_cursor = token;
          progress();
        });
        break;
      case Protocol::kGET:
        fetch_get(http_, source, sink);
        break;
      case Protocol::kS3:
        fetch_s3(http_, source, sink, on_failure);
        break;
    }
  }

  Transformed transform(const ExtractedRecord& extracted) {
    if (extracted.original_identifier.empty()) {
      throw Error(ErrorCode::kValidation, "record without identifier");
    }
    ParsedFields fields = options_.transform(job_.source.format, extracted);
    clean_fields(fields);

    Transformed out;
    MetadataRecord& r = out.record;
    r.descriptive = std::move(fields.descriptive);
    if (r.descriptive.title.empty()) r.descriptive.title = clean_text(extracted.original_identifier);
    r.technical = std::move(fields.technical);

    auto& p = r.processual;
    p.record_id = compute_record_id(job_.source.location, extracted.original_identifier);
    p.source = job_.source.location;
    p.original_identifier = extracted.original_identifier;
    p.created_at = p.modified_at = now_utc();
    p.data_steward = job_.source.data_steward;
    p.ingest_format = job_.source.format;

    r.social.keywords = r.descriptive.subjects;
    r.social.quality_score = quality_score(r);
    r.raw.payload = extracted.payload;
    out.relations = std::move(fields.embedded_relations);
    return out;
  }

  Store& store_;
  HttpClient& http_;
  IngestJob job_;
  const PipelineOptions& options_;
  std::vector<ExtractedRecord> extracted_;
};

}  // namespace

IngestJob run_pipeline(Store& store, HttpClient& http, IngestJob job,
                       const PipelineOptions& options) {
  return Run(store, http, std::move(job), options).execute();
}

}  // namespace metalake
