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

#include <thread>

#include "doctest.h"

using namespace duelps;
using nlohmann::json;

namespace {

// Serves the routes on an ephemeral loopback port for one test.
class LiveServer {
 public:
  explicit LiveServer(const std::string& origin = "*") {
    mount_routes(server_, service_, origin);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(5);
    return c;
  }

 private:
  DuelService service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

const char* kCreate = R"({"env": {"kind": "riverswim"}, "credit": "blr", "seed": 1})";

}  // namespace

TEST_CASE("full duel round trip over HTTP") {
  LiveServer server;
  auto cli = server.client();
  auto created = cli.Post("/api/v1/sessions", kCreate, "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  CHECK(created->get_header_value("Content-Type") == "application/json");
  const std::string id = json::parse(created->body)["session_id"];
  const std::string base = "/api/v1/sessions/" + id;

  auto duel = cli.Get(base + "/duel");
  REQUIRE(duel);
  CHECK(duel->status == 200);
  const json ticket = json::parse(duel->body);
  CHECK(ticket["duel_id"] == 1);
  CHECK(ticket["trajectories"].size() == 2);

  auto pref = cli.Post(base + "/preference", R"({"duel_id": 1, "choice": 2})", "application/json");
  REQUIRE(pref);
  CHECK(pref->status == 200);
  CHECK(json::parse(pref->body)["iteration"] == 1);

  auto stale = cli.Post(base + "/preference", R"({"duel_id": 1, "choice": 2})", "application/json");
  REQUIRE(stale);
  CHECK(stale->status == 409);
  CHECK(json::parse(stale->body)["code"] == "stale_duel");

  auto stats = cli.Get(base + "/stats");
  REQUIRE(stats);
  CHECK(stats->status == 200);
  CHECK(json::parse(stats->body)["iteration"] == 1);
}

TEST_CASE("HTTP error responses") {
  LiveServer server("http://localhost:5173");
  auto cli = server.client();

  auto bad_json = cli.Post("/api/v1/sessions", "{not json", "application/json");
  REQUIRE(bad_json);
  CHECK(bad_json->status == 400);
  CHECK(json::parse(bad_json->body)["code"] == "bad_request");
  CHECK(bad_json->get_header_value("Access-Control-Allow-Origin") == "http://localhost:5173");

  auto bad_config = cli.Post("/api/v1/sessions", R"({"env": {"kind": "riverswim"}, "credit": "x"})",
                             "application/json");
  REQUIRE(bad_config);
  CHECK(bad_config->status == 400);
  const json err = json::parse(bad_config->body);
  CHECK(err["code"] == "invalid_config");
  CHECK(err["field"] == "credit");

  auto missing = cli.Get("/api/v1/sessions/abc123/duel");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["code"] == "not_found");

  auto unknown_route = cli.Get("/api/v1/nothing");
  REQUIRE(unknown_route);
  CHECK(unknown_route->status == 404);
  CHECK(json::parse(unknown_route->body)["code"] == "not_found");

  auto preflight = cli.Options("/api/v1/sessions");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
  CHECK(preflight->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}
