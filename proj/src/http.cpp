// Copyright 2026 The duelps Authors.
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

#include "duelps/http.hpp"

#include <spdlog/spdlog.h>

namespace duelps {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "bad_request", std::string("malformed JSON: ") + e.what());
  }
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      if (e.status() >= 500) spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send(res, e.status(), e.body());
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send(res, 500, {{"code", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

void mount_routes(httplib::Server& server, DuelService& service, const std::string& cors_origin) {
  server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});

  server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Post("/api/v1/sessions", guarded([&service](const httplib::Request& req,
                                                     httplib::Response& res) {
    send(res, 201, service.create_session(parse_body(req)));
  }));

  server.Get(R"(/api/v1/sessions/([0-9a-f]+)/duel)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, service.get_duel(req.matches[1]));
             }));

  server.Post(R"(/api/v1/sessions/([0-9a-f]+)/preference)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                send(res, 200, service.post_preference(req.matches[1], parse_body(req)));
              }));

  server.Get(R"(/api/v1/sessions/([0-9a-f]+)/stats)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, service.get_stats(req.matches[1]));
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send(res, res.status, {{"code", res.status == 404 ? "not_found" : "error"},
                             {"message", httplib::status_message(res.status)}});
    }
  });
}

}  // namespace duelps
