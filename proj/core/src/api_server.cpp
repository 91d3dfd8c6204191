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

#include <sys/socket.h>

#include <cctype>

#include <httplib.h>

#include "metalake/api.hpp"
#include "metalake/error.hpp"

namespace metalake {

struct ApiServer::Impl {
  Api& api;
  httplib::Server server;

  explicit Impl(Api& a) : api(a) {
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request;
      request.method = req.method;
      request.path = req.path;
      for (const auto& [k, v] : req.params) request.query.emplace_back(k, v);
      for (const auto& [k, v] : req.headers) {
        std::string name;
        for (char c : k) name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        request.headers.emplace(std::move(name), v);
      }
      request.body = req.body;

      ApiResponse response = api.handle(request);
      res.status = response.status;
      for (const auto& [k, v] : response.headers) res.set_header(k, v);
      if (!response.content_type.empty()) {
        res.set_content(std::move(response.body), response.content_type);
      }
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Patch(".*", handler);
    server.Delete(".*", handler);
    server.Options(".*", handler);
  }
};

ApiServer::ApiServer(Api& api) : impl_(std::make_unique<Impl>(api)) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& address, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(address);
  } else if (!impl_->server.bind_to_port(address, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kIo, "cannot listen on " + address + ":" + std::to_string(port));
  }
  return bound;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

}  // namespace metalake
