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

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "metalake/api.hpp"
#include "metalake/config.hpp"
#include "metalake/error.hpp"
#include "metalake/ingest_service.hpp"
#include "metalake/store.hpp"

namespace {

using metalake::ServiceConfig;

ServiceConfig load(const std::optional<std::string>& path) {
  std::optional<std::filesystem::path> explicit_path;
  if (path) explicit_path = *path;
  if (auto resolved = metalake::resolve_config_path(explicit_path)) {
    return metalake::load_config(*resolved);
  }
  return ServiceConfig{};
}

struct Services {
  std::unique_ptr<metalake::Store> store;
  std::unique_ptr<metalake::IngestService> ingest;
};

Services open_services(const ServiceConfig& config) {
  std::filesystem::create_directories(config.data_dir);
  Services s;
  s.store = metalake::Store::open(config.data_dir);
  s.ingest = std::make_unique<metalake::IngestService>(
      *s.store, metalake::make_http_client(config.transport), config.data_dir);
  for (const auto& [name, source] : config.sources) {
    if (!s.ingest->find_source(name)) s.ingest->add_source(name, source);
  }
  return s;
}

int serve(const ServiceConfig& config) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  metalake::Api api({config.command_token,
                     "http://" + config.address + ":" + std::to_string(config.port)});
  metalake::ApiServer server(api);
  const int port = server.bind(config.address, config.port);
  std::jthread listener([&server] { server.listen(); });
  std::cout << "metalake listening on http://" << config.address << ":" << port << std::endl;

  Services services = open_services(config);
  api.attach(*services.store, *services.ingest);
  std::cout << "metalake ready" << std::endl;

  int signal = 0;
  sigwait(&signals, &signal);
  std::cout << "metalake shutting down" << std::endl;
  api.detach();
  server.stop();
  return 0;
}

int ingest(const ServiceConfig& config, const std::string& source,
           const std::optional<std::string>& since) {
  Services services = open_services(config);
  const metalake::IngestJob job = services.ingest->run(source, since);
  std::cout << "job " << job.job_id << " " << metalake::to_string(job.state)
            << ": seen " << job.counts.seen << ", loaded " << job.counts.loaded << ", skipped "
            << job.counts.skipped << ", failed " << job.counts.failed << ", edges "
            << job.edges_created << "\n";
  for (const auto& e : job.errors) {
    std::cerr << "  " << e.original_identifier << ": " << e.message << "\n";
  }
  if (job.failure) std::cerr << "failed: " << *job.failure << "\n";
  return job.state == metalake::JobState::kDone ? 0 : 1;
}

int export_record(const ServiceConfig& config, const std::string& id) {
  Services services = open_services(config);
  metalake::ApiOptions options;
  options.fallback_origin = "http://" + config.address + ":" + std::to_string(config.port);
  options.count_views = false;
  metalake::Api api(options);
  api.attach(*services.store, *services.ingest);
  metalake::ApiRequest request;
  request.method = "GET";
  request.path = std::string(metalake::kApiPrefix) + "/metadata/" + id;
  const metalake::ApiResponse response = api.handle(request);
  (response.status == 200 ? std::cout : std::cerr)
      << nlohmann::json::parse(response.body).dump(2) << "\n";
  return response.status == 200 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metalake: metadata lake service"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    std::string("Configuration file (default: $") + metalake::kConfigEnvVar + ")");
  };

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  add_config(serve_cmd);

  std::string source;
  std::optional<std::string> since;
  auto* ingest_cmd = app.add_subcommand("ingest", "Run one ingest job in the foreground");
  add_config(ingest_cmd);
  ingest_cmd->add_option("--source", source, "Source name or id")->required();
  ingest_cmd->add_option("--since", since, "Harvest records changed on or after this date");

  std::string record_id;
  auto* export_cmd = app.add_subcommand("export", "Print one record as JSON:API document");
  add_config(export_cmd);
  export_cmd->add_option("--id", record_id, "Record id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ServiceConfig config = load(config_path);
    if (serve_cmd->parsed()) return serve(config);
    if (ingest_cmd->parsed()) return ingest(config, source, since);
    return export_record(config, record_id);
  } catch (const metalake::Error& e) {
    std::cerr << "metalake: " << e.what() << "\n";
    return e.code() == metalake::ErrorCode::kInvalidInput ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "metalake: " << e.what() << "\n";
    return 1;
  }
}
