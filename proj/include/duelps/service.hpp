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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "duelps/engine.hpp"

namespace duelps {

/// Request failure carrying the HTTP status and the error body fields.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message, std::string field = {})
      : std::runtime_error(message), status_(status), code_(std::move(code)),
        field_(std::move(field)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const std::string& field() const { return field_; }

  /// {code, message, field?}
  nlohmann::json body() const;

 private:
  int status_;
  std::string code_;
  std::string field_;
};

struct SessionSetup {
  nlohmann::json config;
  std::shared_ptr<const Environment> env;
  CreditConfig credit;
  double dynamics_prior = 1.0;
  std::uint64_t seed = 0;
  bool known_dynamics = false;
};

/// Validates a POST /sessions body; ConfigError on bad input.
SessionSetup parse_session_setup(const nlohmann::json& body);

/// Fresh learner session for `setup`, seeded exactly like a library run.
Session make_session(const SessionSetup& setup);

/// Display data for one trajectory. Never contains utilities.
nlohmann::json render_trajectory(const Environment& env, const Trajectory& trajectory);

/// Human-in-the-loop DPS sessions. Every mutation is appended to
/// <data_dir>/<id>/events.jsonl before the call returns; a snapshot.json
/// compacts the log every `compact_every` events. An empty data_dir keeps
/// everything in memory.
class DuelService {
 public:
  explicit DuelService(std::filesystem::path data_dir = {}, int compact_every = 64);

  /// 201 body {session_id}.
  nlohmann::json create_session(const nlohmann::json& body);
  /// The pending ticket, generating one if none is pending.
  nlohmann::json get_duel(const std::string& id);
  /// body {duel_id, choice}; returns {iteration, summary}.
  nlohmann::json post_preference(const std::string& id, const nlohmann::json& body);
  nlohmann::json get_stats(const std::string& id);

  /// Writes a snapshot and truncates the event log.
  void compact(const std::string& id);

  std::vector<std::string> session_ids() const;

  /// Runs `fn` on the live session under its lock.
  void inspect(const std::string& id, const std::function<void(const Session&)>& fn);

 private:
  struct Pending {
    int duel_id = 0;
    Trajectory first;
    Trajectory second;
    double v_pi1 = 0.0;
    double v_pi2 = 0.0;
    std::string issued_at;
  };
  struct Entry {
    std::mutex mu;
    std::string id;
    SessionSetup setup;
    std::unique_ptr<Session> session;
    std::optional<Pending> pending;
    int next_duel_id = 1;
    /// True values of both policies for every answered duel.
    std::vector<std::pair<double, double>> values;
    long seq = 0;
    int since_snapshot = 0;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  nlohmann::json ticket(const Entry& entry) const;
  nlohmann::json summary(const Entry& entry) const;

  void append_event(Entry& entry, nlohmann::json event);
  void write_snapshot(Entry& entry);
  void load_all();
  std::shared_ptr<Entry> load(const std::filesystem::path& dir);
  void apply_event(Entry& entry, const nlohmann::json& event);

  std::filesystem::path data_dir_;
  int compact_every_;
  mutable std::shared_mutex map_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace duelps
