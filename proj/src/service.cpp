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

#include "duelps/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "duelps/harness.hpp"

namespace duelps {

using nlohmann::json;
namespace fs = std::filesystem;

json ServiceError::body() const {
  json j = {{"code", code_}, {"message", what()}};
  if (!field_.empty()) j["field"] = field_;
  return j;
}

SessionSetup parse_session_setup(const json& body) {
  if (!body.is_object()) throw ConfigError("config", "expected an object");
  if (body.contains("oracle")) {
    throw ConfigError("oracle", "service sessions always use the human oracle");
  }
  if (body.contains("algorithm") &&
      !(body["algorithm"].is_string() && body["algorithm"] == "dps")) {
    throw ConfigError("algorithm", "service sessions run dps");
  }
  const ExperimentConfig c = parse_experiment(body, false);
  SessionSetup setup;
  setup.config = body;
  setup.env = std::make_shared<const Environment>(make_environment(c.env));
  setup.credit = c.credit;
  setup.dynamics_prior = c.dynamics_prior;
  setup.seed = c.seed;
  setup.known_dynamics = c.known_dynamics;
  return setup;
}

Session make_session(const SessionSetup& setup) {
  const TabularMdp& mdp = setup.env->mdp;
  return Session(setup.env, make_reward_model(setup.credit, *setup.env),
                 DirichletDynamics(mdp.num_states(), mdp.num_actions(), setup.dynamics_prior),
                 learner_rng(setup.seed), SessionOptions{setup.known_dynamics});
}

json render_trajectory(const Environment& env, const Trajectory& trajectory) {
  json j;
  j["states"] = trajectory.states;
  j["actions"] = trajectory.actions;
  j["steps"] = trajectory.steps();
  std::vector<long> visits(static_cast<std::size_t>(trajectory.visits.size()));
  for (Eigen::Index k = 0; k < trajectory.visits.size(); ++k) {
    visits[static_cast<std::size_t>(k)] = std::lround(trajectory.visits(k));
  }
  j["visits"] = visits;

  const int A = env.mdp.num_actions();
  json render;
  switch (env.spec.kind) {
    case EnvKind::kRiverSwim:
      render["kind"] = "chain";
      render["num_states"] = env.mdp.num_states();
      render["positions"] = trajectory.states;
      break;
    case EnvKind::kMountainCar: {
      const int position_bins = static_cast<int>(env.coords.col(0).maxCoeff()) + 1;
      const double width =
          (mountain_car::kMaxPosition - mountain_car::kMinPosition) / position_bins;
      std::vector<int> pbins, vbins;
      std::vector<double> positions;
      for (int s : trajectory.states) {
        const auto row = sa_index(s, 0, A);
        const int pb = static_cast<int>(env.coords(row, 0));
        pbins.push_back(pb);
        vbins.push_back(static_cast<int>(env.coords(row, 1)));
        positions.push_back(mountain_car::kMinPosition + (pb + 0.5) * width);
      }
      render["kind"] = "car";
      render["position_bins"] = pbins;
      render["velocity_bins"] = vbins;
      render["positions"] = positions;
      render["goal_position"] = mountain_car::kGoalPosition;
      render["reached_goal"] = env.mdp.is_terminal(trajectory.states.back());
      break;
    }
    case EnvKind::kRandomMdp:
      render["kind"] = "table";
      render["states"] = trajectory.states;
      render["actions"] = trajectory.actions;
      break;
  }
  j["render"] = render;
  return j;
}

namespace {

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream os;
  os << std::hex << gen();
  return os.str();
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string save_rng(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

void load_rng(Rng& rng, const std::string& text) {
  std::istringstream is(text);
  is >> rng;
  if (!is) throw InvalidModelError("corrupt generator state");
}

json trajectory_record(const Trajectory& t) {
  return {{"states", t.states}, {"actions", t.actions}};
}

Trajectory trajectory_from(const TabularMdp& mdp, const json& j) {
  return make_trajectory(mdp, j.at("states").get<std::vector<int>>(),
                         j.at("actions").get<std::vector<int>>());
}

ServiceError not_found(const std::string& id) {
  return ServiceError(404, "not_found", "unknown session '" + id + "'");
}

}  // namespace

DuelService::DuelService(fs::path data_dir, int compact_every)
    : data_dir_(std::move(data_dir)), compact_every_(compact_every) {
  if (!data_dir_.empty()) {
    fs::create_directories(data_dir_);
    load_all();
  }
}

std::vector<std::string> DuelService::session_ids() const {
  std::shared_lock lock(map_mu_);
  std::vector<std::string> ids;
  for (const auto& [id, entry] : sessions_) ids.push_back(id);
  return ids;
}

std::shared_ptr<DuelService::Entry> DuelService::find(const std::string& id) const {
  std::shared_lock lock(map_mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw not_found(id);
  return it->second;
}

void DuelService::inspect(const std::string& id, const std::function<void(const Session&)>& fn) {
  const auto entry = find(id);
  std::lock_guard lock(entry->mu);
  fn(*entry->session);
}

json DuelService::create_session(const json& body) {
  auto entry = std::make_shared<Entry>();
  try {
    entry->setup = parse_session_setup(body);
  } catch (const ConfigError& e) {
    throw ServiceError(400, "invalid_config", e.what(), e.field());
  } catch (const std::exception& e) {
    throw ServiceError(400, "invalid_config", e.what());
  }
  entry->session = std::make_unique<Session>(make_session(entry->setup));
  {
    std::unique_lock lock(map_mu_);
    do {
      entry->id = new_session_id();
    } while (sessions_.count(entry->id));
    sessions_[entry->id] = entry;
  }
  std::lock_guard lock(entry->mu);
  if (!data_dir_.empty()) fs::create_directories(data_dir_ / entry->id);
  append_event(*entry, {{"type", "create"}, {"config", body}});
  spdlog::info("session {} created", entry->id);
  return {{"session_id", entry->id}};
}

json DuelService::ticket(const Entry& entry) const {
  const Pending& p = *entry.pending;
  const Environment& env = entry.session->environment();
  return {{"session_id", entry.id},
          {"duel_id", p.duel_id},
          {"issued_at", p.issued_at},
          {"env", std::string(to_string(env.spec.kind))},
          {"trajectories", {render_trajectory(env, p.first), render_trajectory(env, p.second)}}};
}

json DuelService::get_duel(const std::string& id) {
  const auto entry = find(id);
  std::lock_guard lock(entry->mu);
  if (entry->pending) return ticket(*entry);

  Session& s = *entry->session;
  json event;
  try {
    const Policy pi1 = s.advance();
    const Policy pi2 = s.advance();
    const Trajectory t1 = s.rollout(pi1);
    const Trajectory t2 = s.rollout(pi2);
    event = {{"type", "duel"},
             {"duel_id", entry->next_duel_id},
             {"first", trajectory_record(t1)},
             {"second", trajectory_record(t2)},
             {"v_pi1", policy_value(s.mdp(), pi1)},
             {"v_pi2", policy_value(s.mdp(), pi2)},
             {"issued_at", utc_now()},
             {"rng", save_rng(s.rng())}};
  } catch (const std::exception& e) {
    throw ServiceError(500, "numeric_error", e.what());
  }
  append_event(*entry, event);
  return ticket(*entry);
}

json DuelService::summary(const Entry& entry) const {
  const Session& s = *entry.session;
  return {{"map_norm", reward_posterior(s.reward_model()).mean.norm()},
          {"dynamics_visits", s.dynamics().observed()}};
}

json DuelService::post_preference(const std::string& id, const json& body) {
  const auto entry = find(id);
  if (!body.is_object()) throw ServiceError(400, "bad_request", "expected an object");
  if (!body.contains("duel_id") || !body["duel_id"].is_number_integer()) {
    throw ServiceError(400, "bad_request", "duel_id must be an integer", "duel_id");
  }
  if (!body.contains("choice") || !body["choice"].is_number_integer() ||
      (body["choice"] != 1 && body["choice"] != 2)) {
    throw ServiceError(400, "bad_request", "choice must be 1 or 2", "choice");
  }
  const int duel_id = body["duel_id"].get<int>();
  const int choice = body["choice"].get<int>();

  std::lock_guard lock(entry->mu);
  if (!entry->pending || entry->pending->duel_id != duel_id) {
    throw ServiceError(409, "stale_duel", "duel " + std::to_string(duel_id) + " is not pending",
                       "duel_id");
  }
  try {
    append_event(*entry, {{"type", "preference"}, {"duel_id", duel_id}, {"choice", choice}});
    return {{"iteration", entry->session->iteration()}, {"summary", summary(*entry)}};
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError(500, "numeric_error", e.what());
  }
}

json DuelService::get_stats(const std::string& id) {
  const auto entry = find(id);
  std::lock_guard lock(entry->mu);
  const Session& s = *entry->session;
  const TabularMdp& mdp = s.mdp();

  json values = json::array();
  for (std::size_t i = 0; i < entry->values.size(); ++i) {
    values.push_back({{"iter", i + 1},
                      {"v_pi1", entry->values[i].first},
                      {"v_pi2", entry->values[i].second}});
  }
  json policy = json::array();
  try {
    const Policy greedy = greedy_policy(s);
    for (int st = 0; st < mdp.num_states(); ++st) {
      std::vector<int> row(static_cast<std::size_t>(mdp.horizon()));
      for (int t = 0; t < mdp.horizon(); ++t) row[static_cast<std::size_t>(t)] = greedy.action(st, t);
      policy.push_back(row);
    }
    return {{"session_id", entry->id},
            {"env", std::string(to_string(s.environment().spec.kind))},
            {"iteration", s.iteration()},
            {"num_states", mdp.num_states()},
            {"num_actions", mdp.num_actions()},
            {"horizon", mdp.horizon()},
            {"v_star", optimal_value(mdp)},
            {"true_values", values},
            {"greedy_policy", policy},
            {"summary", summary(*entry)},
            {"pending_duel", entry->pending ? json(entry->pending->duel_id) : json(nullptr)}};
  } catch (const std::exception& e) {
    throw ServiceError(500, "numeric_error", e.what());
  }
}

void DuelService::apply_event(Entry& entry, const json& event) {
  const std::string type = event.at("type").get<std::string>();
  if (type == "create") {
    entry.setup = parse_session_setup(event.at("config"));
    entry.session = std::make_unique<Session>(make_session(entry.setup));
  } else if (type == "duel") {
    const TabularMdp& mdp = entry.session->mdp();
    Pending p;
    p.duel_id = event.at("duel_id").get<int>();
    p.first = trajectory_from(mdp, event.at("first"));
    p.second = trajectory_from(mdp, event.at("second"));
    p.v_pi1 = event.at("v_pi1").get<double>();
    p.v_pi2 = event.at("v_pi2").get<double>();
    p.issued_at = event.at("issued_at").get<std::string>();
    load_rng(entry.session->rng(), event.at("rng").get<std::string>());
    entry.pending = std::move(p);
    entry.next_duel_id = entry.pending->duel_id + 1;
  } else if (type == "preference") {
    if (!entry.pending || entry.pending->duel_id != event.at("duel_id").get<int>()) {
      throw InvalidModelError("preference event without its duel");
    }
    const double y = event.at("choice").get<int>() == 2 ? kSecondPreferred : kFirstPreferred;
    entry.session->feedback(entry.pending->first, entry.pending->second, y);
    entry.values.emplace_back(entry.pending->v_pi1, entry.pending->v_pi2);
    entry.pending.reset();
  } else {
    throw InvalidModelError("unknown event type '" + type + "'");
  }
}

void DuelService::append_event(Entry& entry, json event) {
  event["seq"] = entry.seq + 1;
  // Persist first so that a failed write leaves memory untouched.
  if (!data_dir_.empty()) {
    std::ofstream out(data_dir_ / entry.id / "events.jsonl", std::ios::app);
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw ServiceError(500, "storage_error", "cannot append to the event log");
  }
  apply_event(entry, event);
  entry.seq += 1;
  if (!data_dir_.empty() && ++entry.since_snapshot >= compact_every_) write_snapshot(entry);
}

void DuelService::compact(const std::string& id) {
  const auto entry = find(id);
  std::lock_guard lock(entry->mu);
  if (!data_dir_.empty()) write_snapshot(*entry);
}

void DuelService::write_snapshot(Entry& entry) {
  const Session& s = *entry.session;
  json history = json::array();
  for (std::size_t i = 0; i < s.history().size(); ++i) {
    const Duel& d = s.history()[i];
    history.push_back({{"first", trajectory_record(d.first)},
                       {"second", trajectory_record(d.second)},
                       {"y", d.y},
                       {"v_pi1", entry.values[i].first},
                       {"v_pi2", entry.values[i].second}});
  }
  json pending = nullptr;
  if (entry.pending) {
    const Pending& p = *entry.pending;
    pending = {{"duel_id", p.duel_id},
               {"first", trajectory_record(p.first)},
               {"second", trajectory_record(p.second)},
               {"v_pi1", p.v_pi1},
               {"v_pi2", p.v_pi2},
               {"issued_at", p.issued_at}};
  }
  const json snap = {{"seq", entry.seq},
                     {"config", entry.setup.config},
                     {"next_duel_id", entry.next_duel_id},
                     {"rng", save_rng(s.rng())},
                     {"history", history},
                     {"pending", pending}};

  const fs::path dir = data_dir_ / entry.id;
  const fs::path tmp = dir / "snapshot.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << snap.dump();
    if (!out) throw ServiceError(500, "storage_error", "cannot write snapshot");
  }
  fs::rename(tmp, dir / "snapshot.json");
  // Events up to snap.seq are now redundant; load() skips them if the
  // truncation below is lost.
  std::ofstream(dir / "events.jsonl", std::ios::trunc);
  entry.since_snapshot = 0;
}

std::shared_ptr<DuelService::Entry> DuelService::load(const fs::path& dir) {
  auto entry = std::make_shared<Entry>();
  entry->id = dir.filename().string();

  if (fs::exists(dir / "snapshot.json")) {
    std::ifstream in(dir / "snapshot.json");
    const json snap = json::parse(in);
    entry->setup = parse_session_setup(snap.at("config"));
    entry->session = std::make_unique<Session>(make_session(entry->setup));
    const TabularMdp& mdp = entry->session->mdp();
    for (const json& d : snap.at("history")) {
      entry->session->feedback(trajectory_from(mdp, d.at("first")),
                               trajectory_from(mdp, d.at("second")), d.at("y").get<double>());
      entry->values.emplace_back(d.at("v_pi1").get<double>(), d.at("v_pi2").get<double>());
    }
    const json& p = snap.at("pending");
    if (!p.is_null()) {
      Pending pending;
      pending.duel_id = p.at("duel_id").get<int>();
      pending.first = trajectory_from(mdp, p.at("first"));
      pending.second = trajectory_from(mdp, p.at("second"));
      pending.v_pi1 = p.at("v_pi1").get<double>();
      pending.v_pi2 = p.at("v_pi2").get<double>();
      pending.issued_at = p.at("issued_at").get<std::string>();
      entry->pending = std::move(pending);
    }
    entry->next_duel_id = snap.at("next_duel_id").get<int>();
    load_rng(entry->session->rng(), snap.at("rng").get<std::string>());
    entry->seq = snap.at("seq").get<long>();
  }

  std::ifstream events(dir / "events.jsonl");
  std::string line;
  while (std::getline(events, line)) {
    if (line.empty()) continue;
    const json event = json::parse(line);
    const long seq = event.at("seq").get<long>();
    if (seq <= entry->seq) continue;
    if (!entry->session && event.at("type") != "create") {
      throw InvalidModelError("event log does not start with create");
    }
    apply_event(*entry, event);
    entry->seq = seq;
    ++entry->since_snapshot;
  }
  if (!entry->session) throw InvalidModelError("empty session directory");
  return entry;
}

void DuelService::load_all() {
  for (const auto& item : fs::directory_iterator(data_dir_)) {
    if (!item.is_directory()) continue;
    try {
      auto entry = load(item.path());
      spdlog::info("session {} restored at iteration {}", entry->id, entry->session->iteration());
      sessions_[entry->id] = std::move(entry);
    } catch (const std::exception& e) {
      spdlog::error("skipping session directory {}: {}", item.path().string(), e.what());
    }
  }
}

}  // namespace duelps
