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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metalake/harvest.hpp"
#include "metalake/parsers.hpp"
#include "metalake/source.hpp"
#include "metalake/store.hpp"

namespace metalake {

enum class JobState { kPending, kExtracting, kTransforming, kLoading, kLinking, kDone, kFailed };

std::string_view to_string(JobState state);
bool is_terminal(JobState state);

struct JobCounts {
  std::size_t seen = 0;
  std::size_t loaded = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;

  friend bool operator==(const JobCounts&, const JobCounts&) = default;
};

struct RecordError {
  std::string original_identifier;
  std::string message;
};

struct IngestJob {
  std::string job_id;
  std::string source_name;
  SourceConfig source;
  std::optional<std::string> since;
  JobState state = JobState::kPending;
  // Every state the job has entered, in order.
  std::vector<JobState> history{JobState::kPending};
  JobCounts counts;
  std::optional<Timestamp> started_at;
  std::optional<Timestamp> finished_at;
  std::vector<RecordError> errors;
  // Message of the error that aborted the run.
  std::optional<std::string> failure;
  std::optional<std::string> resumption_cursor;
  std::size_t edges_created = 0;
};

// Partial transformation of one extracted record. The default is the
// format's crosswalk.
using TransformFn = std::function<ParsedFields(SourceFormat, const ExtractedRecord&)>;

ParsedFields crosswalk_transform(SourceFormat format, const ExtractedRecord& record);

struct PipelineOptions {
  TransformFn transform = crosswalk_transform;
  // Called with a snapshot after every state change and loaded record.
  std::function<void(const IngestJob&)> on_progress;
};

// Extracts every record of the source, transforms, cleans and scores them,
// upserts them into the store and finally links the loaded batch. Records
// that fail to parse, transform or validate are counted as failed and the
// run goes on; transport and protocol errors end it in kFailed after the
// records extracted so far have been loaded.
IngestJob run_pipeline(Store& store, HttpClient& http, IngestJob job,
                       const PipelineOptions& options = {});

// Trim, NFC and removal of empty values over every text field.
void clean_fields(ParsedFields& fields);

// Resolves the embedded relations of the batch records, and stored relations
// pointing at the batch records' identifiers, into edges. Returns the number
// of edges created.
std::size_t link_records(Store& store, const std::vector<RecordId>& batch);

}  // namespace metalake
