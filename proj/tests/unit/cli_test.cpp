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

#include <gtest/gtest.h>

#include <csignal>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "api_client.hpp"
#include "fixtures.hpp"
#include "metalake/record_id.hpp"
#include "process.hpp"
#include "simulators.hpp"

namespace metalake {
namespace {

using nlohmann::json;

#ifdef METALAKE_CLI_PATH
const std::string kCli = METALAKE_CLI_PATH;
#else
const std::string kCli;
#endif

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    if (kCli.empty()) GTEST_SKIP() << "command-line tool not built";
  }

  std::filesystem::path write_config(const json& config) {
    const auto path = dir_.path() / "lake.json";
    std::ofstream(path) << config.dump(2);
    return path;
  }

  json config_for(const std::string& location) const {
    return {{"listen", {{"address", "127.0.0.1"}, {"port", 0}}},
            {"dataDir", "data"},
            {"transport", {{"attempts", 3}, {"backoffMs", 5}, {"timeoutMs", 5000}}},
            {"sources",
             {{"sim",
               {{"location", location},
                {"protocol", "OAIPMH"},
                {"encoding", "XML"},
                {"format", "DublinCore"},
                {"dataSteward", "steward@example.org"}}}}}};
  }

  testing::TempDir dir_;
};

TEST_F(Cli, IngestThenExport) {
  testing::OaiPmhSimulator sim(testing::numbered_oai_records(5, SourceFormat::kDublinCore), 2);
  const auto config = write_config(config_for(sim.location()));
  auto r = testing::run_process({kCli, "ingest", "--config", config.string(), "--source", "sim"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("done: seen 5, loaded 5, skipped 0, failed 0"), std::string::npos) << r.out;
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "data" / "records.log"));

  const auto id = compute_record_id(sim.location(), "oai:sim:3").str();
  r = testing::run_process({kCli, "export", "--config", config.string(), "--id", id});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["data"]["id"], id);
  EXPECT_EQ(doc["data"]["attributes"]["raw"]["payload"], sim.served_payload("oai:sim:3"));
  EXPECT_EQ(doc["data"]["attributes"]["descriptive"]["title"], "Record 3");
  EXPECT_EQ(doc["data"]["attributes"]["social"]["viewCount"], 0);

  r = testing::run_process({kCli, "export", "--config", config.string(), "--id", id});
  EXPECT_EQ(json::parse(r.out)["data"]["attributes"]["social"]["viewCount"], 0);
}

TEST_F(Cli, ConfigFromEnvironment) {
  testing::OaiPmhSimulator sim(testing::numbered_oai_records(2, SourceFormat::kDublinCore), 10);
  const auto config = write_config(config_for(sim.location()));
  const auto r = testing::run_process({kCli, "ingest", "--source", "sim"}, {{"METALAKE_CONFIG", config.string()}});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("loaded 2"), std::string::npos);
}

TEST_F(Cli, FailuresHaveNonZeroExit) {
  testing::OaiPmhSimulator sim({}, 10);
  const auto config = write_config(config_for(sim.location()));
  auto r = testing::run_process({kCli, "export", "--config", config.string(), "--id", "AAAAAAAAAAA"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(json::parse(r.err)["errors"][0]["status"], "404");

  r = testing::run_process({kCli, "ingest", "--config", config.string(), "--source", "nope"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("unknown source"), std::string::npos);

  sim.set_error("badArgument");
  r = testing::run_process({kCli, "ingest", "--config", config.string(), "--source", "sim"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("badArgument"), std::string::npos);

  std::ofstream(dir_.path() / "bad.json") << R"({"listen": {"port": "x"}})";
  r = testing::run_process({kCli, "export", "--config", (dir_.path() / "bad.json").string(), "--id", "x"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("listen.port"), std::string::npos);

  r = testing::run_process({kCli});
  EXPECT_NE(r.exit_code, 0);
  r = testing::run_process({kCli, "ingest"});
  EXPECT_NE(r.exit_code, 0);
}

TEST_F(Cli, ServeAnswersAndStopsOnSigterm) {
  testing::OaiPmhSimulator sim(testing::numbered_oai_records(3, SourceFormat::kDublinCore), 10);
  const auto config = write_config(config_for(sim.location()));
  testing::ChildProcess server({kCli, "serve", "--config", config.string()}, dir_.path());
  ASSERT_TRUE(server.wait_for_output("metalake ready", std::chrono::seconds(10))) << server.output();
  std::smatch m;
  const std::string out = server.output();
  ASSERT_TRUE(std::regex_search(out, m, std::regex("listening on (http://[0-9.]+:[0-9]+)")));
  const std::string origin = m[1];

  EXPECT_EQ(testing::http_get(origin, "/api/v1/ready").status, 200);
  const auto posted = testing::http_post(origin, "/api/v1/ingest", R"({"sourceRef": "sim"})");
  ASSERT_EQ(posted.status, 202) << posted.body;
  const std::string job = json::parse(posted.body)["data"]["id"];
  std::string state;
  for (int i = 0; i < 200 && state != "done"; ++i) {
    state = json::parse(testing::http_get(origin, "/api/v1/ingest/" + job).body)["data"]["attributes"]["state"];
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  EXPECT_EQ(state, "done");
  EXPECT_EQ(json::parse(testing::http_get(origin, "/api/v1/stats").body)["data"]["attributes"]["recordCount"], 3);

  server.signal(SIGTERM);
  EXPECT_EQ(server.wait(), 0);
}

}  // namespace
}  // namespace metalake
