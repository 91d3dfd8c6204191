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

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "metalake/http_client.hpp"
#include "metalake/pipeline.hpp"
#include "metalake/source.hpp"
#include "metalake/store.hpp"

namespace metalake {

struct RegisteredSource {
  std::string name;
  std::string id;
  SourceConfig config;
  // Start of the last run that finished in kDone.
  std::optional<Timestamp> last_success_start;
};

// Source registry plus the job runner. At most one job per source runs at a
// time; jobs of different sources run concurrently on their own threads.
// With a state directory, API-registered sources and the last successful
// start of every source survive restarts (sources.json).
class IngestService {
 public:
  IngestService(Store& store, std::shared_ptr<HttpClient> http,
                std::optional<std::filesystem::path> state_dir = std::nullopt,
                PipelineOptions options = {});
  ~IngestService();
  IngestService(const IngestService&) = delete;
  IngestService& operator=(const IngestService&) = delete;

  // Throws Error(kValidation) listing the violations of an invalid config and
  // Error(kConflict) when the name or (location, format) is taken.
  RegisteredSource add_source(std::string name, SourceConfig config);
  // Registers under the source id.
  RegisteredSource register_source(SourceConfig config);

  std::vector<RegisteredSource> sources() const;
  // By name or by source id.
  std::optional<RegisteredSource> find_source(std::string_view ref) const;

  // Queues a run and returns its initial snapshot. Without an explicit
  // `since`, OAI-PMH sources harvest from the day of the last successful
  // start. Throws Error(kNotFound) for unknown sources and Error(kConflict)
  // while the source has a running job.
  IngestJob start(std::string_view source_ref, std::optional<std::string> since = std::nullopt);
  // Same as start, but runs on the calling thread and returns the final job.
  IngestJob run(std::string_view source_ref, std::optional<std::string> since = std::nullopt);

  std::optional<IngestJob> job(std::string_view job_id) const;
  std::vector<IngestJob> jobs() const;

  // Blocks until no job is running.
  void wait_idle();

 private:
  IngestJob prepare(std::string_view source_ref, std::optional<std::string> since);
  IngestJob execute(IngestJob job);
  void load_state();
  void save_state_locked() const;
  RegisteredSource add_locked(std::string name, SourceConfig config, bool api_registered);

  Store& store_;
  std::shared_ptr<HttpClient> http_;
  std::optional<std::filesystem::path> state_file_;
  PipelineOptions options_;

  mutable std::mutex mutex_;
  std::condition_variable idle_;
  std::map<std::string, RegisteredSource, std::less<>> sources_;
  std::set<std::string, std::less<>> api_registered_;
  std::set<std::string, std::less<>> running_;
  std::map<std::string, IngestJob, std::less<>> jobs_;
  std::vector<std::jthread> threads_;
};

}  // namespace metalake
