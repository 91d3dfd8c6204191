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

#include "metalake/ingest_service.hpp"

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "metalake/error.hpp"

namespace metalake {

using nlohmann::json;

namespace {

std::string new_job_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  return RecordId::from_digest(rng()).str();
}

std::string day_of(Timestamp t) { return format_timestamp(t).substr(0, 10); }

std::string describe(const ValidationReport& report) {
  std::string out;
  for (const auto& v : report) {
    if (!out.empty()) out += "; ";
    out += v.field + ": " + v.problem;
  }
  return out;
}

}  // namespace

IngestService::IngestService(Store& store, std::shared_ptr<HttpClient> http,
                             std::optional<std::filesystem::path> state_dir,
                             PipelineOptions options)
    : store_(store), http_(std::move(http)), options_(std::move(options)) {
  if (state_dir) {
    state_file_ = *state_dir / "sources.json";
    load_state();
  }
}

IngestService::~IngestService() {
  wait_idle();
  threads_.clear();
}

void IngestService::load_state() {
  std::ifstream in(*state_file_);
  if (!in) return;
  json state;
  try {
    state = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, state_file_->string() + ": " + e.what());
  }
  const json sources = state.value("sources", json::array());
  const json last_success = state.value("lastSuccess", json::object());
  for (const auto& entry : sources) {
    const std::string name = entry.at("name").get<std::string>();
    if (!sources_.contains(name)) {
      ValidationReport violations;
      SourceConfig config = source_from_json(entry.at("config"), violations);
      if (!violations.empty()) {
        throw Error(ErrorCode::kIo, state_file_->string() + ": source '" + name +
                                        "': " + describe(violations));
      }
      add_locked(name, std::move(config), true);
    }
  }
  for (const auto& [name, stamp] : last_success.items()) {
    auto it = sources_.find(name);
    if (it != sources_.end()) it->second.last_success_start = parse_timestamp(stamp.get<std::string>());
  }
}

void IngestService::save_state_locked() const {
  if (!state_file_) return;
  json state = {{"sources", json::array()}, {"lastSuccess", json::object()}};
  for (const auto& [name, source] : sources_) {
    if (api_registered_.contains(name)) {
      state["sources"].push_back({{"name", name}, {"config", to_json(source.config, true)}});
    }
    if (source.last_success_start) {
      state["lastSuccess"][name] = format_timestamp(*source.last_success_start);
    }
  }
  const auto tmp = std::filesystem::path(*state_file_) += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << state.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, *state_file_);
}

RegisteredSource IngestService::add_locked(std::string name, SourceConfig config,
                                           bool api_registered) {
  if (auto report = validate_source(config); !report.empty()) {
    throw Error(ErrorCode::kValidation, "invalid source '" + name + "': " + describe(report));
  }
  if (sources_.contains(name)) {
    throw Error(ErrorCode::kConflict, "source '" + name + "' already exists");
  }
  for (const auto& [other, source] : sources_) {
    if (source.config.location == config.location && source.config.format == config.format) {
      throw Error(ErrorCode::kConflict, "source '" + other + "' already harvests " +
                                            config.location + " as " +
                                            std::string(to_string(config.format)));
    }
  }
  RegisteredSource source{name, source_id(config), std::move(config), std::nullopt};
  sources_.emplace(name, source);
  if (api_registered) api_registered_.insert(std::move(name));
  return source;
}

RegisteredSource IngestService::add_source(std::string name, SourceConfig config) {
  std::lock_guard lock(mutex_);
  return add_locked(std::move(name), std::move(config), false);
}

RegisteredSource IngestService::register_source(SourceConfig config) {
  std::lock_guard lock(mutex_);
  std::string id = source_id(config);
  auto source = add_locked(id, std::move(config), true);
  try {
    save_state_locked();
  } catch (...) {
    sources_.erase(id);
    api_registered_.erase(id);
    throw;
  }
  return source;
}

std::vector<RegisteredSource> IngestService::sources() const {
  std::lock_guard lock(mutex_);
  std::vector<RegisteredSource> out;
  for (const auto& [name, source] : sources_) out.push_back(source);
  return out;
}

std::optional<RegisteredSource> IngestService::find_source(std::string_view ref) const {
  std::lock_guard lock(mutex_);
  if (auto it = sources_.find(ref); it != sources_.end()) return it->second;
  for (const auto& [name, source] : sources_) {
    if (source.id == ref) return source;
  }
  return std::nullopt;
}

IngestJob IngestService::prepare(std::string_view source_ref, std::optional<std::string> since) {
  const auto source = find_source(source_ref);
  if (!source) {
    throw Error(ErrorCode::kNotFound, "unknown source '" + std::string(source_ref) + "'");
  }
  if (since) {
    const auto parsed = parse_timestamp(*since);
    if (!parsed) throw Error(ErrorCode::kInvalidInput, "since must be an ISO 8601 date or UTC timestamp");
    since = day_of(*parsed);
  }
  std::lock_guard lock(mutex_);
  if (running_.contains(source->name)) {
    throw Error(ErrorCode::kConflict, "source '" + source->name + "' is already ingesting");
  }
  IngestJob job;
  job.job_id = new_job_id();
  job.source_name = source->name;
  job.source = source->config;
  job.since = since;
  if (!job.since && source->config.protocol == Protocol::kOAIPMH && source->last_success_start) {
    job.since = day_of(*source->last_success_start);
  }
  running_.insert(source->name);
  jobs_.emplace(job.job_id, job);
  return job;
}

IngestJob IngestService::execute(IngestJob job) {
  PipelineOptions options = options_;
  options.on_progress = [this, user = options_.on_progress](const IngestJob& snapshot) {
    {
      std::lock_guard lock(mutex_);
      jobs_[snapshot.job_id] = snapshot;
    }
    if (user) user(snapshot);
  };
  const std::string name = job.source_name;
  const std::string id = job.job_id;
  IngestJob done;
  try {
    done = run_pipeline(store_, *http_, std::move(job), options);
  } catch (const std::exception& e) {
    std::lock_guard lock(mutex_);
    done = jobs_[id];
    done.failure = e.what();
    done.state = JobState::kFailed;
    done.history.push_back(JobState::kFailed);
    done.finished_at = now_utc();
  }
  {
    std::lock_guard lock(mutex_);
    jobs_[done.job_id] = done;
    auto it = sources_.find(name);
    if (done.state == JobState::kDone && it != sources_.end()) {
      it->second.last_success_start = done.started_at;
      try {
        save_state_locked();
      } catch (const std::exception&) {
      }
    }
    running_.erase(name);
  }
  idle_.notify_all();
  return done;
}

IngestJob IngestService::start(std::string_view source_ref, std::optional<std::string> since) {
  IngestJob job = prepare(source_ref, std::move(since));
  std::lock_guard lock(mutex_);
  threads_.emplace_back([this, job] { execute(job); });
  return job;
}

IngestJob IngestService::run(std::string_view source_ref, std::optional<std::string> since) {
  return execute(prepare(source_ref, std::move(since)));
}

std::optional<IngestJob> IngestService::job(std::string_view job_id) const {
  std::lock_guard lock(mutex_);
  if (auto it = jobs_.find(job_id); it != jobs_.end()) return it->second;
  return std::nullopt;
}

std::vector<IngestJob> IngestService::jobs() const {
  std::lock_guard lock(mutex_);
  std::vector<IngestJob> out;
  for (const auto& [id, job] : jobs_) out.push_back(job);
  return out;
}

void IngestService::wait_idle() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [this] { return running_.empty(); });
}

}  // namespace metalake
